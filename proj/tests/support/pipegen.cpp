#include "pipegen.hpp"

#include <algorithm>
#include <optional>

namespace pipegen {
namespace {

using nlohmann::json;
const std::string kPulled = "\xCE\xBC:";

struct Shadow {
  std::string fact;
  std::vector<std::string> links;
  struct Ax {
    std::string name, level;
    bool pulled = false;
    std::vector<std::string> order;
  };
  std::vector<Ax> axes;
  std::vector<std::string> measures;
};

template <class T>
const T& pick(const std::vector<T>& v, std::mt19937_64& rng) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

bool coin(std::mt19937_64& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

class Generator {
 public:
  Generator(const xolap::WarehouseInstance& instance, std::mt19937_64& rng) : w_(instance), rng_(rng) {}

  json base() {
    const auto& facts = w_.schema().fact_classes;
    const auto& fact = pick(facts, rng_);
    s_.fact = fact.id;
    s_.links = fact.dimension_links;
    std::vector<std::string> dims = s_.links;
    std::shuffle(dims.begin(), dims.end(), rng_);
    const std::size_t n = std::uniform_int_distribution<std::size_t>(0, dims.size())(rng_);
    json axes = json::array();
    for (std::size_t i = 0; i < n; ++i) {
      const auto& spec = w_.dimension(dims[i]).spec();
      const auto& level = pick(spec.levels, rng_).id;
      axes.push_back({{"dimension", dims[i]}, {"level", level}});
      s_.axes.push_back({dims[i], level, false, w_.dimension(dims[i]).members_at(level)});
    }
    json op = {{"op", "base"}, {"fact", fact.id}, {"axes", axes}};
    if (coin(rng_, 0.3)) {
      static const std::vector<std::string> fns = {"sum", "count", "min", "max", "avg"};
      json ms = json::array();
      for (const auto& m : fact.measures) {
        if (!coin(rng_, 0.7)) continue;
        json entry = {{"name", m.name}};
        if (coin(rng_)) entry["aggregate"] = pick(fns, rng_);
        ms.push_back(entry);
        s_.measures.push_back(m.name);
      }
      op["measures"] = ms;
    } else {
      for (const auto& m : fact.measures) s_.measures.push_back(m.name);
    }
    if (s_.measures.empty()) s_.measures.push_back("count");
    return op;
  }

  std::optional<json> make(const std::string& kind) {
    if (kind == "slice") return slice();
    if (kind == "dice") return dice();
    if (kind == "rollup") return shift(true);
    if (kind == "drilldown") return shift(false);
    if (kind == "rotate") return rotate();
    if (kind == "switch") return switch_op();
    if (kind == "push") return push();
    if (kind == "pull") return pull();
    if (kind == "cube") return cube();
    return std::nullopt;
  }

 private:
  const std::vector<std::string>& members(const std::string& dim, const std::string& level) {
    return w_.dimension(dim).members_at(level);
  }

  std::optional<std::pair<std::string, std::string>> populated_level(const std::string& dim) {
    std::vector<std::string> levels;
    for (const auto& l : w_.dimension(dim).spec().levels) {
      if (!members(dim, l.id).empty()) levels.push_back(l.id);
    }
    if (levels.empty()) return std::nullopt;
    return std::make_pair(dim, pick(levels, rng_));
  }

  std::optional<json> slice() {
    auto dl = populated_level(pick(s_.links, rng_));
    if (!dl) return std::nullopt;
    const auto& [dim, level] = *dl;
    const std::string member = pick(members(dim, level), rng_);
    std::erase_if(s_.axes, [&](const Shadow::Ax& a) { return a.name == dim; });
    return json{{"op", "slice"}, {"dimension", dim}, {"level", level}, {"member", member}};
  }

  std::optional<json> dice() {
    json preds = json::array();
    const int n = coin(rng_) ? 1 : 2;
    for (int i = 0; i < n; ++i) {
      auto dl = populated_level(pick(s_.links, rng_));
      if (!dl) continue;
      const auto& [dim, level] = *dl;
      std::vector<std::string> all = members(dim, level);
      std::shuffle(all.begin(), all.end(), rng_);
      // Mostly generous subsets so that results stay non-trivial.
      const std::size_t k = std::uniform_int_distribution<std::size_t>((all.size() + 1) / 2, all.size())(rng_);
      all.resize(std::max<std::size_t>(k, 1));
      preds.push_back({{"dimension", dim}, {"level", level}, {"members", all}});
    }
    if (preds.empty()) return std::nullopt;
    return json{{"op", "dice"}, {"predicates", preds}};
  }

  std::optional<json> shift(bool coarser) {
    std::vector<std::pair<std::size_t, std::string>> options;
    for (std::size_t i = 0; i < s_.axes.size(); ++i) {
      const auto& a = s_.axes[i];
      if (a.pulled) continue;
      const auto& table = w_.dimension(a.name);
      const int here = table.depth_of(a.level);
      for (const auto& l : table.spec().levels) {
        if (coarser ? l.depth > here : l.depth < here) options.emplace_back(i, l.id);
      }
    }
    if (options.empty()) return std::nullopt;
    const auto& [i, level] = pick(options, rng_);
    s_.axes[i].level = level;
    s_.axes[i].order = members(s_.axes[i].name, level);
    return json{{"op", coarser ? "rollup" : "drilldown"}, {"dimension", s_.axes[i].name}, {"level", level}};
  }

  std::optional<json> rotate() {
    std::vector<std::size_t> perm(s_.axes.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng_);
    std::vector<Shadow::Ax> next;
    for (std::size_t p : perm) next.push_back(s_.axes[p]);
    s_.axes = std::move(next);
    return json{{"op", "rotate"}, {"permutation", perm}};
  }

  std::optional<json> switch_op() {
    std::vector<std::size_t> options;
    for (std::size_t i = 0; i < s_.axes.size(); ++i) {
      if (!s_.axes[i].pulled) options.push_back(i);
    }
    if (options.empty()) return std::nullopt;
    auto& a = s_.axes[pick(options, rng_)];
    std::shuffle(a.order.begin(), a.order.end(), rng_);
    return json{{"op", "switch"}, {"dimension", a.name}, {"order", a.order}};
  }

  std::optional<json> push() {
    std::vector<std::string> options;
    std::vector<std::array<std::string, 3>> triples;
    for (const auto& dim : s_.links) {
      for (const auto& l : w_.dimension(dim).spec().levels) {
        for (const auto& attr : l.attributes) {
          const std::string name = dim + "." + l.id + "." + attr.name;
          if (xolap::is_numeric(attr.type) && std::find(s_.measures.begin(), s_.measures.end(), name) == s_.measures.end() &&
              std::none_of(s_.axes.begin(), s_.axes.end(), [&](const Shadow::Ax& a) { return a.name == kPulled + name; })) {
            triples.push_back({dim, l.id, attr.name});
          }
        }
      }
    }
    if (triples.empty()) return std::nullopt;
    const auto& t = pick(triples, rng_);
    s_.measures.push_back(t[0] + "." + t[1] + "." + t[2]);
    return json{{"op", "push"}, {"dimension", t[0]}, {"level", t[1]}, {"attribute", t[2]}};
  }

  std::optional<json> pull() {
    std::vector<std::string> options;
    for (const auto& m : s_.measures) {
      if (std::none_of(s_.axes.begin(), s_.axes.end(), [&](const Shadow::Ax& a) { return a.name == kPulled + m; })) {
        options.push_back(m);
      }
    }
    if (options.empty()) return std::nullopt;
    const std::string m = pick(options, rng_);
    std::erase(s_.measures, m);
    s_.axes.push_back({kPulled + m, "value", true, {}});
    if (s_.measures.empty()) s_.measures.push_back("count");
    return json{{"op", "pull"}, {"measure", m}};
  }

  std::optional<json> cube() {
    if (s_.axes.empty()) return std::nullopt;
    std::vector<std::string> chosen;
    for (const auto& a : s_.axes) {
      if (coin(rng_, 0.7)) chosen.push_back(a.name);
    }
    if (chosen.empty()) chosen.push_back(pick(s_.axes, rng_).name);
    return json{{"op", "cube"}, {"axes", chosen}};
  }

  const xolap::WarehouseInstance& w_;
  std::mt19937_64& rng_;
  Shadow s_;
};

const std::vector<std::string> kOps = {"slice", "dice",  "rollup", "drilldown", "rotate",
                                       "switch", "push", "pull",   "cube"};

}  // namespace

json random_pipeline(const xolap::WarehouseInstance& instance, std::mt19937_64& rng, const Options& options) {
  Generator g(instance, rng);
  json out = json::array({g.base()});
  const std::size_t length = std::uniform_int_distribution<std::size_t>(1, options.max_length)(rng);
  int attempts = 0;
  while (out.size() < length && attempts++ < 40) {
    const std::string& kind = kOps[std::uniform_int_distribution<std::size_t>(0, kOps.size() - 1)(rng)];
    if (kind == "cube" && !options.allow_cube) continue;
    if (auto op = g.make(kind)) out.push_back(std::move(*op));
  }
  return out;
}

json pipeline_ending_with(const xolap::WarehouseInstance& instance, std::mt19937_64& rng, const std::string& op,
                          const Options& options) {
  Generator g(instance, rng);
  json out = json::array({g.base()});
  const std::size_t length = std::uniform_int_distribution<std::size_t>(1, options.max_length - 1)(rng);
  int attempts = 0;
  while (out.size() < length && attempts++ < 40) {
    const std::string& kind = kOps[std::uniform_int_distribution<std::size_t>(0, kOps.size() - 1)(rng)];
    if (kind == "cube" && !options.allow_cube) continue;
    if (auto o = g.make(kind)) out.push_back(std::move(*o));
  }
  auto last = g.make(op);
  if (!last) return nullptr;
  out.push_back(std::move(*last));
  return out;
}

}  // namespace pipegen
