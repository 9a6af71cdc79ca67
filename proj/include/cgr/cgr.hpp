#pragma once

#include "cgr/linalg.hpp"
#include "cgr/qoscillator.hpp"
#include "cgr/report.hpp"
#include "cgr/rmatrix.hpp"
#include "cgr/sampling.hpp"
#include "cgr/spinchain.hpp"
