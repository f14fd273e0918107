#include "logictree/surface/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include "json.hpp"
#include "logictree/error.hpp"
#include "logictree/rng.hpp"
#include "logictree/treegen/profile.hpp"

namespace logictree::surface {

using nlohmann::ordered_json;

std::vector<Instance> generate_dataset(const GenerateOptions& options,
                                       const FactPool& pool,
                                       const TemplatePool& templates) {
  if (options.groups_per_depth < 1) throw PreconditionError("groups must be >= 1");
  if (options.variants < 2) throw PreconditionError("variants must be >= 2");

  struct Job {
    int depth;
    int group_id;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  int next_group = 0;
  for (int d : options.depths) {
    treegen::DifficultyProfile::standard(d);  // validates the depth
    const std::uint64_t depth_seed = derive_seed(options.seed, "depth", d);
    for (int g = 0; g < options.groups_per_depth; ++g) {
      jobs.push_back({d, next_group++, derive_seed(depth_seed, "group", g)});
    }
  }

  std::vector<std::vector<Instance>> results(jobs.size());
  std::atomic<std::size_t> cursor{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= jobs.size()) return;
      try {
        const Job& job = jobs[i];
        const auto profile = treegen::DifficultyProfile::standard(job.depth);
        auto group = treegen::make_variant_group(job.seed, profile,
                                                 options.variants, pool.size());
        for (const auto& abstract : group) {
          results[i].push_back(
              instantiate(abstract, job.group_id, profile, pool, templates));
        }
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        cursor = jobs.size();
        return;
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(options.jobs,
                                                     static_cast<unsigned>(jobs.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (unsigned t = 0; t < n; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<Instance> out;
  out.reserve(jobs.size() * static_cast<std::size_t>(options.variants));
  for (auto& r : results) {
    for (auto& inst : r) out.push_back(std::move(inst));
  }
  return out;
}

std::array<std::size_t, 3> apportion(std::size_t n, std::array<int, 3> ratios) {
  long long sum = 0;
  for (int r : ratios) {
    if (r <= 0) throw PreconditionError("split ratios must be positive");
    sum += r;
  }
  std::array<std::size_t, 3> out{};
  std::array<long long, 3> rem{};
  std::size_t given = 0;
  for (int i = 0; i < 3; ++i) {
    const long long num = static_cast<long long>(n) * ratios[i];
    out[i] = static_cast<std::size_t>(num / sum);
    rem[i] = num % sum;
    given += out[i];
  }
  while (given < n) {
    int best = 0;
    for (int i = 1; i < 3; ++i) {
      if (rem[i] > rem[best]) best = i;
    }
    ++out[best];
    rem[best] = -1;
    ++given;
  }
  return out;
}

std::vector<int> assign_splits(const std::vector<Instance>& instances,
                               std::array<int, 3> ratios, std::uint64_t seed) {
  if (instances.empty()) throw PreconditionError("no instances to split");
  std::map<int, std::vector<int>> groups_by_depth;
  std::map<int, int> depth_of_group;
  for (const auto& inst : instances) {
    auto [it, fresh] = depth_of_group.emplace(inst.group_id, inst.depth);
    if (fresh) {
      groups_by_depth[inst.depth].push_back(inst.group_id);
    } else if (it->second != inst.depth) {
      throw ValidationError("group " + std::to_string(inst.group_id) +
                            " spans several depths");
    }
  }
  std::map<int, int> split_of_group;
  for (auto& [depth, groups] : groups_by_depth) {
    std::sort(groups.begin(), groups.end());
    Rng rng(derive_seed(seed, "split", static_cast<std::uint64_t>(depth)));
    rng.shuffle(std::span<int>(groups));
    const auto sizes = apportion(groups.size(), ratios);
    std::size_t k = 0;
    for (int s = 0; s < 3; ++s) {
      for (std::size_t i = 0; i < sizes[s]; ++i) split_of_group[groups[k++]] = s;
    }
  }
  std::vector<int> out;
  out.reserve(instances.size());
  for (const auto& inst : instances) out.push_back(split_of_group.at(inst.group_id));
  return out;
}

std::string Manifest::to_json() const {
  ordered_json j;
  j["schema"] = kManifestSchema;
  j["instance_schema"] = kInstanceSchema;
  j["profile_table"] = treegen::kProfileTableVersion;
  j["seed"] = seed;
  j["ratios"] = ratios;
  j["rounding"] =
      "group-atomic; groups shuffled per depth, largest-remainder apportionment "
      "of groups by ratio, ties to the earlier split";
  j["total_instances"] = total_instances;
  j["total_questions"] = total_questions;
  ordered_json s;
  for (int i = 0; i < 3; ++i) {
    s[kSplitNames[i]] = {{"file", std::string(kSplitNames[i]) + ".jsonl"},
                         {"groups", splits[i].groups},
                         {"instances", splits[i].instances},
                         {"questions", splits[i].questions}};
  }
  j["splits"] = std::move(s);
  ordered_json by_depth = ordered_json::object();
  for (const auto& [d, counts] : groups_by_depth) {
    by_depth[std::to_string(d)] = counts;
  }
  j["groups_by_depth"] = std::move(by_depth);
  return j.dump(2) + "\n";
}

Manifest write_dataset(const std::vector<Instance>& instances,
                       std::array<int, 3> ratios, std::uint64_t seed,
                       const std::filesystem::path& out_dir) {
  const auto split = assign_splits(instances, ratios, seed);

  Manifest m;
  m.seed = seed;
  m.ratios = ratios;
  std::array<std::vector<const Instance*>, 3> members;
  std::map<int, std::array<std::size_t, 3>> depth_counts;
  std::map<int, bool> seen_group;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const Instance& inst = instances[i];
    const int s = split[i];
    members[s].push_back(&inst);
    m.splits[s].instances += 1;
    m.splits[s].questions += inst.questions.size();
    if (seen_group.emplace(inst.group_id, true).second) {
      m.splits[s].groups += 1;
      depth_counts[inst.depth][s] += 1;
    }
    m.total_instances += 1;
    m.total_questions += inst.questions.size();
  }
  for (const auto& [d, c] : depth_counts) m.groups_by_depth.emplace_back(d, c);

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  for (int s = 0; s < 3; ++s) {
    auto& list = members[s];
    std::stable_sort(list.begin(), list.end(), [](const Instance* a, const Instance* b) {
      return std::tie(a->depth, a->group_id, a->variant_idx) <
             std::tie(b->depth, b->group_id, b->variant_idx);
    });
    const auto path = out_dir / (std::string(kSplitNames[s]) + ".jsonl");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    for (const Instance* inst : list) out << to_json_line(*inst) << '\n';
    if (!out.flush()) throw IoError("write failed for " + path.string());
  }
  const auto manifest_path = out_dir / "manifest.json";
  std::ofstream mf(manifest_path, std::ios::binary | std::ios::trunc);
  if (!mf) throw IoError("cannot write " + manifest_path.string());
  mf << m.to_json();
  if (!mf.flush()) throw IoError("write failed for " + manifest_path.string());
  return m;
}

}  // namespace logictree::surface
