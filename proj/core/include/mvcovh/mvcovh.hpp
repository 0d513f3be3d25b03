#pragma once

#include "mvcovh/clustering.hpp"
#include "mvcovh/csv.hpp"
#include "mvcovh/error.hpp"
#include "mvcovh/factorization.hpp"
#include "mvcovh/harness.hpp"
#include "mvcovh/metrics.hpp"
#include "mvcovh/mvdata.hpp"
#include "mvcovh/random.hpp"
#include "mvcovh/report_io.hpp"
#include "mvcovh/synth.hpp"
