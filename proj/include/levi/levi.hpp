#pragma once

#include "calculus.hpp"
#include "errors.hpp"
#include "expr.hpp"
#include "jet.hpp"
#include "literal.hpp"
#include "number.hpp"
#include "rational.hpp"
#include "series.hpp"
#include "wlud.hpp"
