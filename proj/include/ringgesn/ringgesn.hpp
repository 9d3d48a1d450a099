#pragma once

// Everything except the network fetcher (fetch.hpp), which pulls in the HTTP client.
#include "ringgesn/errors.hpp"
#include "ringgesn/evaluation.hpp"
#include "ringgesn/folds.hpp"
#include "ringgesn/graph.hpp"
#include "ringgesn/kernels.hpp"
#include "ringgesn/matrix.hpp"
#include "ringgesn/parallel.hpp"
#include "ringgesn/pi_digits.hpp"
#include "ringgesn/random.hpp"
#include "ringgesn/readout.hpp"
#include "ringgesn/report.hpp"
#include "ringgesn/reservoir.hpp"
#include "ringgesn/ridge.hpp"
#include "ringgesn/search.hpp"
#include "ringgesn/tudataset.hpp"
