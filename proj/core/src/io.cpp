#include "codedcache/io.hpp"

#include <cstdio>

#include <nlohmann/json.hpp>

namespace codedcache {

using nlohmann::json;

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string to_json(const ProblemInstance& inst) {
  json j;
  j["N"] = inst.num_contents;
  j["K"] = inst.num_users;
  j["M"] = inst.cache_size;
  j["F"] = inst.bits_per_content;
  return j.dump();
}

std::string to_json(const PopularityDist& pop) {
  json j;
  j["p"] = pop.probs();
  return j.dump();
}

std::string to_json(const CachingDist& q) {
  json j;
  j["q"] = q.fractions();
  return j.dump();
}

namespace {

json parse(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ParameterError("json: malformed document");
  return j;
}

}  // namespace

ProblemInstance instance_from_json(const std::string& text) {
  const json j = parse(text);
  ProblemInstance inst;
  try {
    inst.num_contents = j.at("N").get<int>();
    inst.num_users = j.at("K").get<int>();
    inst.cache_size = j.at("M").get<double>();
    inst.bits_per_content = j.at("F").get<std::int64_t>();
  } catch (const json::exception& e) {
    throw ParameterError(std::string("instance: ") + e.what());
  }
  inst.validate();
  return inst;
}

PopularityDist popularity_from_json(const std::string& text) {
  const json j = parse(text);
  if (!j.contains("p") || !j["p"].is_array()) throw ParameterError("p: missing array");
  return PopularityDist(j["p"].get<std::vector<double>>());
}

CachingDist caching_from_json(const std::string& text) {
  const json j = parse(text);
  if (!j.contains("q") || !j["q"].is_array()) throw ParameterError("q: missing array");
  return CachingDist(j["q"].get<std::vector<double>>());
}

}  // namespace codedcache
