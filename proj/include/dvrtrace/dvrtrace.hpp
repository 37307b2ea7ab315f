#pragma once

#include "dvrtrace/valuation.hpp"
#include "dvrtrace/errors.hpp"
#include "dvrtrace/field.hpp"
#include "dvrtrace/finite_field.hpp"
#include "dvrtrace/poly.hpp"
#include "dvrtrace/ratfunc.hpp"
#include "dvrtrace/dvr.hpp"
#include "dvrtrace/parse.hpp"
#include "dvrtrace/matrix.hpp"
#include "dvrtrace/factor.hpp"
#include "dvrtrace/algebra.hpp"
#include "dvrtrace/fiber.hpp"
#include "dvrtrace/extension.hpp"
#include "dvrtrace/invariants.hpp"
#include "dvrtrace/verdict.hpp"
#include "dvrtrace/io.hpp"
#include "dvrtrace/corpus.hpp"
#include "dvrtrace/harness.hpp"
#include "dvrtrace/suites.hpp"
