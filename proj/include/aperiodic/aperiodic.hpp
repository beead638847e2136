#pragma once

#include "golden.hpp"
#include "interval.hpp"
#include "text.hpp"
#include "parallel.hpp"
#include "linalg.hpp"
#include "substitution.hpp"
#include "model_set.hpp"
#include "window_ifs.hpp"
#include "correlations.hpp"
#include "diffraction.hpp"
#include "export.hpp"
