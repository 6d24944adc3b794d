#pragma once

#include "xling/footprint/catalog.hpp"
#include "xling/footprint/compare.hpp"
#include "xling/footprint/model.hpp"
