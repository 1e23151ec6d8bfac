#pragma once

// The demo catalog.  Each demo is a self-checking numerical experiment:
// it runs one phenomenon end to end, compares every measured quantity
// against its analytic reference (or a hard bound) at a pinned tolerance,
// and returns a Report whose failed rows make the CLI exit nonzero.
//
//   gap             the gap functional sits strictly below the linearized
//                   energy on the compressive affine field v = -x
//   tension         minimum coincidence under tension plus an h-sweep of
//                   the rescaled energies toward the linearized minimum
//   weak_compat     trace-free resultant: minimizers exist but are only
//                   unique up to a compressive affine direction
//   compression     inward normal traction: energies along the rotation
//                   sequence blow up to minus infinity like 1/h
//   noncompact      zero load: rotation-like fields with vanishing energy
//                   and unbounded gradients
//   nonconvexity3d  midpoint of two zero-energy fields has strictly
//                   positive energy (3D inner problem, box domain)
//   gamma_sweep     generic h-sweep driver for a configured compatible load
//   nonlocality     splitting the domain strictly lowers the summed energy
//                   on a one-sided compression field

#include "tgap/report.hpp"
#include "tgap/scenario.hpp"

namespace tgap {

// Executes the scenario's demo kind and returns the full report.
// Throws ConfigError for invalid configurations (including loads that do
// not meet a demo's premise, e.g. a non-compatible gamma_sweep load).
Report run_scenario(const Scenario& s);

// The 3D nonconvexity experiment with its default configuration
// (unit cube, zero load, mu = lambda = 1).
Report demo_nonconvexity();

}  // namespace tgap
