#include "logictree/drer/io.hpp"

#include <map>

#include "json.hpp"
#include "logictree/error.hpp"

namespace logictree::drer {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::optional<double> opt_number(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  if (!j.at(key).is_number()) throw ParseError(std::string(key) + " is not a number");
  return j.at(key).get<double>();
}

}  // namespace

std::vector<Rollout> read_rollouts(std::istream& in) {
  std::vector<Rollout> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      Rollout r;
      r.prompt_id = j.at("prompt_id").is_string() ? j.at("prompt_id").get<std::string>()
                                                  : j.at("prompt_id").dump();
      if (j.contains("bucket") && !j.at("bucket").is_null()) r.bucket = j.at("bucket").get<int>();
      r.length = opt_number(j, "length");
      r.r_task = opt_number(j, "r_task");
      r.l_cot = opt_number(j, "l_cot");
      r.l_nocot = opt_number(j, "l_nocot");
      if (j.contains("correct") && !j.at("correct").is_null()) r.correct = j.at("correct").get<bool>();
      r.format_ok = j.value("format_ok", true);
      out.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw ParseError(std::string("rollout: ") + e.what(), lineno);
    } catch (const ParseError& e) {
      throw ParseError(std::string("rollout: ") + e.what(), lineno);
    }
  }
  return out;
}

std::vector<std::vector<Rollout>> group_by_prompt(const std::vector<Rollout>& rollouts) {
  std::vector<std::vector<Rollout>> groups;
  std::map<std::string, std::size_t> index;
  for (const auto& r : rollouts) {
    auto [it, fresh] = index.emplace(r.prompt_id, groups.size());
    if (fresh) groups.emplace_back();
    groups[it->second].push_back(r);
  }
  return groups;
}

std::vector<ValidationSample> to_validation_samples(const std::vector<Rollout>& rollouts) {
  std::vector<ValidationSample> out;
  out.reserve(rollouts.size());
  for (std::size_t i = 0; i < rollouts.size(); ++i) {
    const auto& r = rollouts[i];
    if (!r.bucket || !r.length) {
      throw ValidationError("rollout " + std::to_string(i) + " ('" + r.prompt_id +
                            "') needs bucket and length for bounds estimation");
    }
    out.push_back({*r.bucket, *r.length, r.is_correct(), r.format_ok});
  }
  return out;
}

std::string bounds_to_json(const LengthBounds& bounds) {
  ordered_json j;
  j["schema"] = kBoundsSchema;
  j["buckets"] = ordered_json::array();
  for (const auto& [b, bb] : bounds.buckets) {
    j["buckets"].push_back({{"bucket", bb.bucket},
                            {"l_min", bb.l_min},
                            {"l_max", bb.l_max},
                            {"n", bb.n},
                            {"step", bb.step},
                            {"disabled", bb.disabled},
                            {"carried", bb.carried}});
  }
  return j.dump(2) + "\n";
}

LengthBounds bounds_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    LengthBounds out;
    for (const auto& e : j.at("buckets")) {
      BucketBounds bb;
      bb.bucket = e.at("bucket").get<int>();
      bb.l_min = e.value("l_min", 0.0);
      bb.l_max = e.value("l_max", 0.0);
      bb.n = e.value("n", std::size_t{0});
      bb.step = e.value("step", std::int64_t{0});
      bb.disabled = e.value("disabled", false);
      bb.carried = e.value("carried", false);
      if (!bb.disabled && bb.l_min > bb.l_max) {
        throw ValidationError("bucket " + std::to_string(bb.bucket) + " has l_min > l_max");
      }
      out.buckets[bb.bucket] = bb;
    }
    return out;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bounds: ") + e.what());
  }
}

void write_advantages(std::ostream& out, const std::string& prompt_id,
                      const std::vector<AdvantageResult>& results) {
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& a = results[i];
    ordered_json j;
    j["prompt_id"] = prompt_id;
    j["member_idx"] = i;
    j["r_q"] = a.r_q;
    j["r"] = a.r;
    j["a_tilde"] = a.a_tilde;
    j["g"] = a.g;
    j["a_hat"] = a.a_hat;
    j["skipped"] = a.skipped;
    out << j.dump() << '\n';
  }
}

}  // namespace logictree::drer
