#pragma once

#include "betaop/campaigns.hpp"
#include "betaop/distributions.hpp"
#include "betaop/ensembles.hpp"
#include "betaop/errors.hpp"
#include "betaop/experiment.hpp"
#include "betaop/matrix_models.hpp"
#include "betaop/opuc.hpp"
#include "betaop/oracle.hpp"
#include "betaop/parallel.hpp"
#include "betaop/quadrature.hpp"
#include "betaop/random.hpp"
#include "betaop/stats.hpp"
#include "betaop/summation.hpp"
