#pragma once

#include "fedosov/abelian.hpp"
#include "fedosov/calculus.hpp"
#include "fedosov/chart.hpp"
#include "fedosov/io.hpp"
#include "fedosov/poly.hpp"
#include "fedosov/scalar.hpp"
#include "fedosov/star_function.hpp"
#include "fedosov/trivialization.hpp"
#include "fedosov/verify.hpp"
#include "fedosov/weyl.hpp"
