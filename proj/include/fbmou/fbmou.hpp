#pragma once

#include "fbmou/analysis.hpp"
#include "fbmou/bergomi.hpp"
#include "fbmou/cholesky.hpp"
#include "fbmou/errors.hpp"
#include "fbmou/io.hpp"
#include "fbmou/model.hpp"
#include "fbmou/quadrature.hpp"
#include "fbmou/rng.hpp"
#include "fbmou/serialize.hpp"
#include "fbmou/simulate.hpp"
#include "fbmou/special.hpp"
