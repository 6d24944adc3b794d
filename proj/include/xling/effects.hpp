#pragma once

#include "xling/effects/compose.hpp"
#include "xling/effects/fixtures.hpp"
#include "xling/effects/pretrain.hpp"
#include "xling/effects/rows.hpp"
#include "xling/effects/spec.hpp"
