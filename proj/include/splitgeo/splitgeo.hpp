#pragma once

// splitgeo: a numerical laboratory for totally geodesic split metrics built
// from Liouville-equation conformal factors -- geodesic integration and
// classification, curvature invariants, closed-form trajectory families,
// polynomial-in-momenta first integrals, and the Einstein-Maxwell
// integrability gate.

#include "closed_form.hpp"
#include "config.hpp"
#include "csv.hpp"
#include "dop853.hpp"
#include "domain.hpp"
#include "errors.hpp"
#include "first_integrals.hpp"
#include "geodesic.hpp"
#include "maxwell.hpp"
#include "metric.hpp"
#include "potential.hpp"
#include "quadrature.hpp"
#include "runner.hpp"
#include "version.hpp"
