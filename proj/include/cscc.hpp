#ifndef CSCC_HPP
#define CSCC_HPP

#include "cscc/boundary.hpp"
#include "cscc/cost_model.hpp"
#include "cscc/csv.hpp"
#include "cscc/dataset.hpp"
#include "cscc/errors.hpp"
#include "cscc/evaluation.hpp"
#include "cscc/experiment.hpp"
#include "cscc/json_io.hpp"
#include "cscc/logistic.hpp"
#include "cscc/matrix.hpp"
#include "cscc/metalearners.hpp"
#include "cscc/ranking.hpp"
#include "cscc/rng.hpp"
#include "cscc/svg.hpp"

#endif  // CSCC_HPP
