#pragma once

#include "valuon/expression.hpp"
#include "valuon/finite_semiring.hpp"
#include "valuon/gamma.hpp"
#include "valuon/index_set.hpp"
#include "valuon/matrix.hpp"
#include "valuon/powerset.hpp"
#include "valuon/qval.hpp"
#include "valuon/rational.hpp"
#include "valuon/ring.hpp"
#include "valuon/rng.hpp"
#include "valuon/semiring.hpp"
#include "valuon/tropical.hpp"
