#include <gtest/gtest.h>

#include <random>

#include "encoder_oracle.hpp"
#include "memory_instances.hpp"
#include "pomset/encoder.hpp"
#include "pomset/io.hpp"

using namespace pomset;

namespace {

PartialString fig3() { return io::load_ps(POMSET_SAMPLES_DIR "/fig1.ps"); }

std::size_t count_substr(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

// Random skeleton of synchronizing accesses over addresses x and y.
PartialString random_skeleton(std::mt19937& rng, std::size_t max_events, bool two_addresses) {
  std::vector<Label> alphabet{Label::release("x"), Label::acquire("r", "x")};
  if (two_addresses) {
    alphabet.push_back(Label::release("y"));
    alphabet.push_back(Label::acquire("q", "y"));
  }
  std::uniform_int_distribution<std::size_t> size(0, max_events), pick(0, alphabet.size() - 1);
  std::bernoulli_distribution edge(0.3);
  const std::size_t n = size(rng);
  std::vector<Label> labels;
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(alphabet[pick(rng)]);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (edge(rng)) edges.emplace_back(i, j);
  return PartialString(std::move(labels), std::move(edges));
}

}  // namespace

TEST(Encoder, StarCensus) {
  for (std::size_t n : {2u, 3u, 10u}) {
    const auto in = EncodingInput::make(star_skeleton(n), false);
    const auto cubic = count_constraints(encode_cubic(in));
    const auto quad = count_constraints(encode_quadratic(in));
    EXPECT_EQ(cubic.count(Tag::fr), n * n * (n - 1));
    EXPECT_EQ(quad.count(Tag::wrc), n * n);
    EXPECT_EQ(cubic.count(Tag::wc), n * (n - 1) / 2);
    EXPECT_EQ(quad.count(Tag::wc), n * (n - 1) / 2);
    EXPECT_EQ(cubic.count(Tag::wrc), 0u);
    EXPECT_EQ(quad.count(Tag::fr), 0u);
    EXPECT_TRUE(cubic.matches_prediction(EncodingKind::cubic));
    EXPECT_TRUE(quad.matches_prediction(EncodingKind::quadratic));
  }
}

TEST(Encoder, SinglePair) {
  const auto in = EncodingInput::make(PartialString::antichain({Label::acquire("r", "x"), Label::release("x")}), false);
  const auto c = count_constraints(encode_cubic(in));
  EXPECT_EQ(c.count(Tag::fr), 0u);
  EXPECT_EQ(c.count(Tag::sw), 1u);
  EXPECT_EQ(c.count(Tag::wc), 0u);
}

TEST(Encoder, Empty) {
  const auto in = EncodingInput::make(PartialString());
  for (auto kind : {EncodingKind::cubic, EncodingKind::quadratic}) {
    const auto f = encode(in, kind);
    const auto c = count_constraints(f);
    EXPECT_EQ(c.total, 0u);
    EXPECT_EQ(c.int_vars + c.bool_vars, 0u);
    EXPECT_TRUE(solve(f));
    const auto script = emit(f, EmitFormat::smt2);
    EXPECT_EQ(count_substr(script, "(assert"), 0u);
    EXPECT_EQ(count_substr(script, "(declare-const"), 0u);
    EXPECT_NE(script.find("(check-sat)"), std::string::npos);
  }
  EXPECT_TRUE(equisat_check(in));
}

TEST(Encoder, RejectsOpaque) {
  EXPECT_THROW(EncodingInput::make(PartialString::singleton(Label::opaque("a"))), InvalidArgument);
}

TEST(Encoder, Fig3Skeleton) {
  const auto in = EncodingInput::make(fig3());
  EXPECT_EQ(in.total_events(), 6u);
  for (auto kind : {EncodingKind::cubic, EncodingKind::quadratic}) {
    const auto f = encode(in, kind);
    const auto m = solve(f);
    ASSERT_TRUE(m);
    EXPECT_TRUE(evaluate(f, *m));
    EXPECT_TRUE(encoder_oracle::brute_sat(in, f));
    const auto script = emit(f, EmitFormat::smt2);
    EXPECT_EQ(count_substr(script, " Int)"), kind == EncodingKind::cubic ? 6u : 7u);
    EXPECT_NE(script.find("(declare-const clk_init_b Int)"), std::string::npos);
  }
}

TEST(Encoder, AcquireWithoutRelease) {
  const auto lone = PartialString::singleton(Label::acquire("r", "x"));
  const auto bare = EncodingInput::make(lone, false);
  EXPECT_FALSE(solve(encode_cubic(bare)));
  EXPECT_FALSE(solve(encode_quadratic(bare)));
  const auto init = EncodingInput::make(lone, true);
  const auto f = encode_quadratic(init);
  const auto m = solve(f);
  ASSERT_TRUE(m);
  // The selector takes the initializer's clock.
  EXPECT_EQ(m->ints[2], m->ints[1]);
}

TEST(Encoder, ProgramOrderForcesUnsat) {
  // The acquire precedes the only release it could read from.
  const auto in = EncodingInput::make(PartialString::chain({Label::acquire("r", "x"), Label::release("x")}), false);
  const auto r = equisat_detail(in);
  EXPECT_FALSE(r.cubic_sat);
  EXPECT_FALSE(r.quadratic_sat);
  EXPECT_TRUE(r.agree());
}

TEST(Encoder, Bound) {
  EXPECT_THROW(equisat_check(EncodingInput::make(star_skeleton(5), false)), BoundExceeded);
  EXPECT_NO_THROW(equisat_check(EncodingInput::make(PartialString::antichain(std::vector<Label>(9, Label::release("x"))), false)));
}

TEST(Encoder, EmitDeterministicAndTagged) {
  const auto in = EncodingInput::make(star_skeleton(3), false);
  for (auto kind : {EncodingKind::cubic, EncodingKind::quadratic}) {
    const auto f = encode(in, kind);
    const auto c = count_constraints(f);
    const auto script = emit(f, EmitFormat::smt2);
    EXPECT_EQ(script, emit(encode(EncodingInput::make(star_skeleton(3), false), kind), EmitFormat::smt2));
    EXPECT_EQ(count_substr(script, "(assert"), c.total);
    for (Tag t : kAllTags) EXPECT_EQ(count_substr(script, std::string("; tag=") + to_string(t) + "\n"), c.count(t));
    const auto text = emit(f, EmitFormat::text);
    EXPECT_EQ(count_substr(text, "\n["), c.total);
  }
}

TEST(Encoder, CensusClosedForms) {
  std::mt19937 rng(51);
  for (int iter = 0; iter < 300; ++iter) {
    const auto in = EncodingInput::make(random_skeleton(rng, 8, true), iter % 2 == 0);
    std::size_t fr = 0, wrc = 0, wc = 0;
    for (const auto& idx : in.addresses) {
      const std::size_t a = idx.acquires.size(), r = idx.releases.size();
      fr += a * r * (r ? r - 1 : 0);
      wrc += a * r;
      wc += r * (r ? r - 1 : 0) / 2;
    }
    const auto cubic = count_constraints(encode_cubic(in));
    const auto quad = count_constraints(encode_quadratic(in));
    ASSERT_EQ(cubic.count(Tag::fr), fr);
    ASSERT_EQ(quad.count(Tag::wrc), wrc);
    ASSERT_EQ(cubic.count(Tag::wc), wc);
    ASSERT_EQ(quad.count(Tag::wc), wc);
  }
}

// The built-in search against exhaustive weak-order enumeration.
TEST(Encoder, SolverMatchesBruteForce) {
  std::mt19937 rng(52);
  int sat = 0, unsat = 0;
  for (int iter = 0; iter < 250; ++iter) {
    const bool init = iter % 3 == 0;
    const auto in = EncodingInput::make(random_skeleton(rng, init ? 3 : 5, iter % 2 == 0), init);
    for (auto kind : {EncodingKind::cubic, EncodingKind::quadratic}) {
      const auto f = encode(in, kind);
      const auto m = solve(f);
      const bool expected = encoder_oracle::brute_sat(in, f);
      ASSERT_EQ(m.has_value(), expected) << iter;
      if (m) {
        ASSERT_TRUE(evaluate(f, *m));
      }
      (expected ? sat : unsat)++;
    }
    ASSERT_TRUE(equisat_check(in));
  }
  EXPECT_GT(sat, 50);
  EXPECT_GT(unsat, 50);
}

// Total orders satisfying the cubic encoding are exactly the linearizations
// whose rf choices pass the axioms.
TEST(Encoder, CubicModelsAreAxiomaticExecutions) {
  for (bool init : {false, true})
    instances::for_each_release_acquire(init ? 3 : 4, false, [&](const PartialString& po) {
      const auto in = EncodingInput::make(po, init);
      const auto& x = in.skeleton;
      const auto cubic = encode_cubic(in);
      const auto quad = encode_quadratic(in);
      std::vector<Event> order(x.size());
      std::iota(order.begin(), order.end(), 0);
      do {
        bool linear = true;
        for (std::size_t i = 0; i < order.size(); ++i)
          for (std::size_t j = i + 1; j < order.size(); ++j) linear = linear && !x.less(order[j], order[i]);
        if (!linear) continue;
        std::vector<long long> clocks(x.size());
        std::vector<Edge> chain;
        for (std::size_t i = 0; i < order.size(); ++i) {
          clocks[order[i]] = static_cast<long long>(i);
          if (i) chain.emplace_back(order[i - 1], order[i]);
        }
        const PartialString total(x.labels(), chain, x.names());
        encoder_oracle::for_each_choice(in, [&](const std::vector<Event>& acq, const std::vector<Event>& chosen) {
          RfMap rf;
          for (std::size_t i = 0; i < acq.size(); ++i) rf.set(acq[i], chosen[i]);
          const bool axioms = check_axioms(total, rf).three_axioms();
          ASSERT_EQ(evaluate(cubic, encoder_oracle::make_model(cubic, clocks, acq, chosen)), axioms);
          ASSERT_EQ(evaluate(quad, encoder_oracle::make_model(quad, clocks, acq, chosen)), axioms);
        });
      } while (std::next_permutation(order.begin(), order.end()));
    });
}
