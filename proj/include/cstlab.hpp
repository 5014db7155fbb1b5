#pragma once

#include "cstlab/errors.hpp"
#include "cstlab/primes.hpp"
#include "cstlab/random.hpp"
#include "cstlab/curve.hpp"
#include "cstlab/point_count.hpp"
#include "cstlab/trace_sweep.hpp"
#include "cstlab/trace_cache.hpp"
#include "cstlab/elliptic_integrals.hpp"
#include "cstlab/st_density.hpp"
#include "cstlab/semicircle.hpp"
#include "cstlab/gl2_counts.hpp"
#include "cstlab/local_factors.hpp"
#include "cstlab/lt_harness.hpp"
#include "cstlab/report.hpp"
#include "cstlab/config.hpp"
#include "cstlab/verify.hpp"
