#pragma once

#include <string>

#include "codedcache/model.hpp"

namespace codedcache {

// JSON document forms: {"N":..,"K":..,"M":..,"F":..}, {"p":[..]}, {"q":[..]}.
std::string to_json(const ProblemInstance& inst);
std::string to_json(const PopularityDist& pop);
std::string to_json(const CachingDist& q);

ProblemInstance instance_from_json(const std::string& text);
PopularityDist popularity_from_json(const std::string& text);
CachingDist caching_from_json(const std::string& text);

/// Round-trip-exact decimal formatting shared by every CSV/JSON writer.
std::string format_double(double x);

}  // namespace codedcache
