#pragma once

#include "dqkit/criteria.hpp"
#include "dqkit/errors.hpp"
#include "dqkit/expr.hpp"
#include "dqkit/quadrature.hpp"
#include "dqkit/recover.hpp"
#include "dqkit/report.hpp"
#include "dqkit/sampling.hpp"
#include "dqkit/scalar.hpp"
#include "dqkit/series.hpp"
#include "dqkit/verify.hpp"
