#include "bayimp/model.hpp"

#include <algorithm>

namespace bayimp {

ProfileSpace::ProfileSpace(std::vector<int> dims) : dims_(std::move(dims)) {
  strides_.assign(dims_.size(), 1);
  for (int k = static_cast<int>(dims_.size()) - 2; k >= 0; --k) {
    strides_[k] = strides_[k + 1] * static_cast<std::size_t>(dims_[k + 1]);
  }
  size_ = 1;
  for (int d : dims_) size_ *= static_cast<std::size_t>(d);
}

std::size_t ProfileSpace::index(std::span<const int> coords) const {
  std::size_t idx = 0;
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    idx += static_cast<std::size_t>(coords[k]) * strides_[k];
  }
  return idx;
}

void ProfileSpace::decode(std::size_t idx, std::span<int> out) const {
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    out[k] = static_cast<int>(idx / strides_[k]);
    idx %= strides_[k];
  }
}

std::vector<int> ProfileSpace::coords(std::size_t idx) const {
  std::vector<int> out(dims_.size());
  decode(idx, out);
  return out;
}

ProfileSpace Environment::state_space() const {
  std::vector<int> dims;
  dims.reserve(types.size());
  for (const auto& t : types) dims.push_back(static_cast<int>(t.size()));
  return ProfileSpace(std::move(dims));
}

ProfileSpace Environment::others_space(int agent) const {
  std::vector<int> dims;
  dims.reserve(types.size() - 1);
  for (int j = 0; j < agent_count(); ++j) {
    if (j != agent) dims.push_back(type_count(j));
  }
  return ProfileSpace(std::move(dims));
}

std::optional<int> Environment::agent_index(std::string_view name) const {
  for (int i = 0; i < agent_count(); ++i) {
    if (agents[static_cast<std::size_t>(i)] == name) return i;
  }
  return std::nullopt;
}

std::optional<int> Environment::type_index(int agent, std::string_view label) const {
  const auto& space = types[static_cast<std::size_t>(agent)];
  for (int t = 0; t < static_cast<int>(space.size()); ++t) {
    if (space[static_cast<std::size_t>(t)] == label) return t;
  }
  return std::nullopt;
}

std::optional<int> Environment::outcome_index(std::string_view label) const {
  for (int a = 0; a < outcome_count(); ++a) {
    if (outcomes[static_cast<std::size_t>(a)] == label) return a;
  }
  return std::nullopt;
}

StateJoiner::StateJoiner(const Environment& env, int agent) {
  const ProfileSpace full = env.state_space();
  const ProfileSpace others = env.others_space(agent);
  own_types_ = env.type_count(agent);
  others_size_ = others.size();
  table_.resize(others_size_ * static_cast<std::size_t>(own_types_));

  const int n = env.agent_count();
  std::vector<int> others_coords(static_cast<std::size_t>(n - 1));
  std::vector<int> full_coords(static_cast<std::size_t>(n));
  for (std::size_t q = 0; q < others_size_; ++q) {
    others.decode(q, others_coords);
    int k = 0;
    for (int j = 0; j < n; ++j) {
      if (j == agent) continue;
      full_coords[static_cast<std::size_t>(j)] = others_coords[static_cast<std::size_t>(k++)];
    }
    for (int t = 0; t < own_types_; ++t) {
      full_coords[static_cast<std::size_t>(agent)] = t;
      table_[q * static_cast<std::size_t>(own_types_) + static_cast<std::size_t>(t)] =
          full.index(full_coords);
    }
  }
}

ValidationReport validate_environment(const Environment& env) {
  ValidationReport report;
  if (env.agent_count() < 3) {
    report.add("agent_count", "agents",
               "n >= 3 required, got " + std::to_string(env.agent_count()));
  }
  const ProfileSpace space = env.state_space();
  if (env.prior.size() != space.size()) {
    report.add("prior_total", "prior",
               "prior must cover every type profile (" +
                   std::to_string(space.size()) + " states, " +
                   std::to_string(env.prior.size()) + " entries)");
    return report;
  }
  Rat total = 0;
  for (std::size_t s = 0; s < env.prior.size(); ++s) {
    if (env.prior[s] <= 0) {
      report.add("full_support", "prior[" + state_key(env, s) + "]",
                 "full support violated: prior is not strictly positive");
    }
    total += env.prior[s];
  }
  if (total != 1) {
    report.add("prior_normalized", "prior",
               "prior not normalized: entries sum to " + rational_to_string(total));
  }
  for (int i = 0; i < env.agent_count(); ++i) {
    const auto& u = env.utilities[static_cast<std::size_t>(i)];
    if (static_cast<int>(u.size()) != env.outcome_count()) {
      report.add("utilities_total", "utilities[" + env.agents[static_cast<std::size_t>(i)] + "]",
                 "utility table must cover every outcome");
      continue;
    }
    for (const auto& row : u) {
      if (static_cast<int>(row.size()) != env.type_count(i)) {
        report.add("utilities_total",
                   "utilities[" + env.agents[static_cast<std::size_t>(i)] + "]",
                   "utility table must cover every own type");
        break;
      }
    }
  }
  return report;
}

ValidationReport validate_scf(const Environment& env, const Scf& f) {
  ValidationReport report;
  const ProfileSpace space = env.state_space();
  if (f.table.size() != space.size()) {
    report.add("scf_total", "scf", "scf must assign an outcome to every type profile");
    return report;
  }
  for (std::size_t s = 0; s < f.table.size(); ++s) {
    if (f.table[s] < 0 || f.table[s] >= env.outcome_count()) {
      report.add("scf_range", "scf[" + state_key(env, s) + "]",
                 "scf value is not a listed outcome");
    }
  }
  return report;
}

EconomicVerdict check_economic(const Environment& env, const Scf& f) {
  EconomicVerdict verdict;
  const ProfileSpace space = env.state_space();
  std::vector<int> coords(static_cast<std::size_t>(env.agent_count()));
  for (std::size_t s = 0; s < space.size(); ++s) {
    space.decode(s, coords);
    const int prescribed = f.table[s];
    int first_agent = -1, first_better = -1;
    int second_agent = -1, second_better = -1;
    for (int i = 0; i < env.agent_count() && second_agent < 0; ++i) {
      const int own = coords[static_cast<std::size_t>(i)];
      const Rat& base = env.utility(i, prescribed, own);
      for (int a = 0; a < env.outcome_count(); ++a) {
        if (env.utility(i, a, own) > base) {
          if (first_agent < 0) {
            first_agent = i;
            first_better = a;
          } else {
            second_agent = i;
            second_better = a;
          }
          break;
        }
      }
    }
    if (second_agent < 0) {
      verdict.economic = false;
      verdict.failing_state = s;
      verdict.witnesses.clear();
      return verdict;
    }
    verdict.witnesses.push_back({s, first_agent, first_better, second_agent, second_better});
  }
  return verdict;
}

std::string state_key(const Environment& env, std::size_t state) {
  const ProfileSpace space = env.state_space();
  std::vector<int> coords = space.coords(state);
  std::string key;
  for (int i = 0; i < env.agent_count(); ++i) {
    if (i > 0) key += '|';
    key += env.types[static_cast<std::size_t>(i)][static_cast<std::size_t>(coords[i])];
  }
  return key;
}

std::string others_key(const Environment& env, int agent, std::size_t others_index) {
  const ProfileSpace space = env.others_space(agent);
  std::vector<int> coords = space.coords(others_index);
  std::string key;
  int k = 0;
  for (int j = 0; j < env.agent_count(); ++j) {
    if (j == agent) continue;
    if (k > 0) key += '|';
    key += env.types[static_cast<std::size_t>(j)][static_cast<std::size_t>(coords[k])];
    ++k;
  }
  return key;
}

namespace {

std::vector<std::string> split_key(std::string_view key) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = key.find('|', start);
    if (pos == std::string_view::npos) {
      parts.emplace_back(key.substr(start));
      break;
    }
    parts.emplace_back(key.substr(start, pos - start));
    start = pos + 1;
  }
  return parts;
}

}  // namespace

std::optional<std::size_t> state_from_key(const Environment& env, std::string_view key) {
  const auto parts = split_key(key);
  if (static_cast<int>(parts.size()) != env.agent_count()) return std::nullopt;
  std::vector<int> coords(parts.size());
  for (int i = 0; i < env.agent_count(); ++i) {
    auto t = env.type_index(i, parts[static_cast<std::size_t>(i)]);
    if (!t) return std::nullopt;
    coords[static_cast<std::size_t>(i)] = *t;
  }
  return env.state_space().index(coords);
}

std::optional<std::size_t> others_from_key(const Environment& env, int agent,
                                           std::string_view key) {
  const auto parts = split_key(key);
  if (static_cast<int>(parts.size()) != env.agent_count() - 1) return std::nullopt;
  std::vector<int> coords(parts.size());
  int k = 0;
  for (int j = 0; j < env.agent_count(); ++j) {
    if (j == agent) continue;
    auto t = env.type_index(j, parts[static_cast<std::size_t>(k)]);
    if (!t) return std::nullopt;
    coords[static_cast<std::size_t>(k)] = *t;
    ++k;
  }
  return env.others_space(agent).index(coords);
}

}  // namespace bayimp
