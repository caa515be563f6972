#pragma once

#include "bayescp/csv.hpp"
#include "bayescp/errors.hpp"
#include "bayescp/evidence.hpp"
#include "bayescp/evidence_kernel.hpp"
#include "bayescp/forward.hpp"
#include "bayescp/hyperparams.hpp"
#include "bayescp/inference.hpp"
#include "bayescp/log_sum_exp.hpp"
#include "bayescp/mcem.hpp"
#include "bayescp/seg_prior.hpp"
#include "bayescp/segmentation.hpp"
#include "bayescp/sequence.hpp"
#include "bayescp/simulate.hpp"
