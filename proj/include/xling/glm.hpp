#pragma once

#include "xling/glm/coefficients.hpp"
#include "xling/glm/design.hpp"
#include "xling/glm/logistic.hpp"
