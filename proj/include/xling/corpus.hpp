#pragma once

#include "xling/corpus/io.hpp"
#include "xling/corpus/record.hpp"
#include "xling/corpus/search_terms.hpp"
#include "xling/corpus/split.hpp"
#include "xling/corpus/summary.hpp"
