#pragma once

#include "pomset/errors.hpp"
#include "pomset/label.hpp"
#include "pomset/partial_string.hpp"
#include "pomset/sat.hpp"
#include "pomset/refine.hpp"
#include "pomset/program.hpp"
#include "pomset/lfp.hpp"
#include "pomset/memory.hpp"
#include "pomset/encoder.hpp"
#include "pomset/io.hpp"
