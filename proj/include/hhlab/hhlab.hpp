#pragma once

#include "hhlab/error.hpp"
#include "hhlab/numfmt.hpp"
#include "hhlab/means.hpp"
#include "hhlab/expr.hpp"
#include "hhlab/path.hpp"
#include "hhlab/quadrature.hpp"
#include "hhlab/classify.hpp"
#include "hhlab/theorems.hpp"
#include "hhlab/falsifier.hpp"
#include "hhlab/report.hpp"
