#pragma once

#include "curvkit/clifford.hpp"
#include "curvkit/clifford_analysis.hpp"
#include "curvkit/errors.hpp"
#include "curvkit/hypersurface.hpp"
#include "curvkit/plane_contours.hpp"
#include "curvkit/quadrature.hpp"
#include "curvkit/scene.hpp"
#include "curvkit/verify.hpp"
