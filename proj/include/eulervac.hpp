#pragma once

#include "eulervac/numerics.hpp"
#include "eulervac/core.hpp"
#include "eulervac/eos.hpp"
#include "eulervac/mollify.hpp"
#include "eulervac/besov.hpp"
#include "eulervac/commutator.hpp"
#include "eulervac/riemann.hpp"
#include "eulervac/strong_solution.hpp"
#include "eulervac/relative_energy.hpp"
#include "eulervac/admissibility.hpp"
#include "eulervac/exponents.hpp"
#include "eulervac/certificate.hpp"
#include "eulervac/solver.hpp"
#include "eulervac/vacuum_example.hpp"
#include "eulervac/parallel.hpp"
#include "eulervac/report.hpp"
#include "eulervac/field_io.hpp"
