#pragma once

#include "multipoint/linalg.hpp"
#include "multipoint/problem.hpp"
#include "multipoint/problem_spec.hpp"
#include "multipoint/solvers.hpp"
#include "multipoint/convergence.hpp"
#include "multipoint/efficiency.hpp"
#include "multipoint/format.hpp"
