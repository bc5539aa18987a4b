#pragma once

#include "closed_forms.hpp"
#include "config.hpp"
#include "coupled_modes.hpp"
#include "entries.hpp"
#include "errors.hpp"
#include "field_model.hpp"
#include "io.hpp"
#include "observables.hpp"
#include "propagator.hpp"
#include "quadrature.hpp"
#include "runner.hpp"
#include "theta_solver.hpp"
#include "trajectory.hpp"
