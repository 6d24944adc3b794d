#pragma once

#include "xling/inference/campaign.hpp"
#include "xling/inference/classify.hpp"
#include "xling/inference/endpoint.hpp"
#include "xling/inference/prompt.hpp"
#include "xling/inference/record.hpp"
