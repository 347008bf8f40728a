#include <algorithm>
#include <charconv>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "bgap/groups.hpp"

namespace bgap {

namespace {

using Element = std::vector<int>;

struct GroupModel {
  Element identity;
  std::function<Element(const Element&, const Element&)> multiply;
  std::vector<Element> generators;
  std::vector<std::string> labels;
  std::vector<std::string> inverse_labels;
};

std::string kind_name(GroupKind kind) {
  switch (kind) {
    case GroupKind::cyclic: return "cyclic";
    case GroupKind::boolean_cube: return "boolean_cube";
    case GroupKind::symmetric: return "symmetric";
    case GroupKind::sl_mod: return "sl_mod";
  }
  return "unknown";
}

GroupModel cyclic_model(int n) {
  if (n < 2) throw std::invalid_argument("cyclic: need n >= 2");
  GroupModel g;
  g.identity = {0};
  g.multiply = [n](const Element& a, const Element& b) { return Element{(a[0] + b[0]) % n}; };
  if (n == 2) {
    g.generators = {{1}};
    g.labels = {"+1"};
    g.inverse_labels = {"+1"};
  } else {
    g.generators = {{1}, {n - 1}};
    g.labels = {"+1", "-1"};
    g.inverse_labels = {"-1", "+1"};
  }
  return g;
}

GroupModel boolean_cube_model(int n) {
  if (n < 1 || n > 20) throw std::invalid_argument("boolean_cube: need 1 <= n <= 20");
  GroupModel g;
  g.identity = {0};
  g.multiply = [](const Element& a, const Element& b) { return Element{a[0] ^ b[0]}; };
  for (int i = 0; i < n; ++i) {
    g.generators.push_back({1 << i});
    g.labels.push_back("e" + std::to_string(i));
    g.inverse_labels.push_back("e" + std::to_string(i));
  }
  return g;
}

GroupModel symmetric_model(int n) {
  if (n < 2 || n > 10) throw std::invalid_argument("symmetric: need 2 <= n <= 10");
  GroupModel g;
  g.identity.resize(static_cast<std::size_t>(n));
  std::iota(g.identity.begin(), g.identity.end(), 0);
  g.multiply = [](const Element& a, const Element& b) {
    Element c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[static_cast<std::size_t>(b[i])];
    return c;
  };
  for (int i = 0; i + 1 < n; ++i) {
    Element t = g.identity;
    std::swap(t[static_cast<std::size_t>(i)], t[static_cast<std::size_t>(i + 1)]);
    g.generators.push_back(std::move(t));
    g.labels.push_back("t" + std::to_string(i));
    g.inverse_labels.push_back("t" + std::to_string(i));
  }
  return g;
}

// n x n matrices mod k, row-major.
GroupModel sl_mod_model(int n, int k) {
  if (n < 2 || k < 2) throw std::invalid_argument("sl_mod: need n >= 2 and k >= 2");
  if (n > 9 || k > 1000) throw std::invalid_argument("sl_mod: parameters too large");
  GroupModel g;
  g.identity.assign(static_cast<std::size_t>(n * n), 0);
  for (int i = 0; i < n; ++i) g.identity[static_cast<std::size_t>(i * n + i)] = 1;
  g.multiply = [n, k](const Element& a, const Element& b) {
    Element c(static_cast<std::size_t>(n * n), 0);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        long long s = 0;
        for (int l = 0; l < n; ++l) {
          s += static_cast<long long>(a[static_cast<std::size_t>(i * n + l)]) *
               b[static_cast<std::size_t>(l * n + j)];
        }
        c[static_cast<std::size_t>(i * n + j)] = static_cast<int>(s % k);
      }
    }
    return c;
  };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const std::string base = "E" + std::to_string(i) + std::to_string(j);
      Element plus = g.identity;
      plus[static_cast<std::size_t>(i * n + j)] = 1;
      if (k == 2) {
        g.generators.push_back(std::move(plus));
        g.labels.push_back(base);
        g.inverse_labels.push_back(base);
        continue;
      }
      Element minus = g.identity;
      minus[static_cast<std::size_t>(i * n + j)] = k - 1;
      g.generators.push_back(std::move(plus));
      g.labels.push_back(base + "+");
      g.inverse_labels.push_back(base + "-");
      g.generators.push_back(std::move(minus));
      g.labels.push_back(base + "-");
      g.inverse_labels.push_back(base + "+");
    }
  }
  return g;
}

GroupModel model_for(const GroupSpec& spec) {
  switch (spec.kind) {
    case GroupKind::cyclic: return cyclic_model(spec.n);
    case GroupKind::boolean_cube: return boolean_cube_model(spec.n);
    case GroupKind::symmetric: return symmetric_model(spec.n);
    case GroupKind::sl_mod: return sl_mod_model(spec.n, spec.k);
  }
  throw std::invalid_argument("unknown group kind");
}

struct Enumerated {
  GroupModel model;
  std::vector<Element> elements;
  std::map<Element, int> index;
};

Enumerated enumerate(const GroupSpec& spec, std::size_t cap) {
  Enumerated e{model_for(spec), {}, {}};
  e.elements.push_back(e.model.identity);
  e.index.emplace(e.model.identity, 0);
  for (std::size_t head = 0; head < e.elements.size(); ++head) {
    for (const Element& s : e.model.generators) {
      Element y = e.model.multiply(s, e.elements[head]);
      if (e.index.count(y)) continue;
      if (e.elements.size() >= cap) {
        throw std::runtime_error(spec.to_string() + ": more than " + std::to_string(cap) +
                                 " group elements");
      }
      e.index.emplace(y, static_cast<int>(e.elements.size()));
      e.elements.push_back(std::move(y));
    }
  }
  return e;
}

int parse_int(std::string_view text, std::string_view what) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::invalid_argument("group spec: bad " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

std::string GroupSpec::to_string() const {
  std::string out = kind_name(kind) + ":" + std::to_string(n);
  if (kind == GroupKind::sl_mod) out += ":" + std::to_string(k);
  return out;
}

GroupSpec parse_group(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto colon = text.find(':', start);
    parts.push_back(text.substr(start, colon == std::string_view::npos ? colon : colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  GroupSpec spec;
  const std::string_view kind = parts[0];
  std::size_t want = 2;
  if (kind == "cyclic") {
    spec.kind = GroupKind::cyclic;
  } else if (kind == "boolean_cube") {
    spec.kind = GroupKind::boolean_cube;
  } else if (kind == "symmetric") {
    spec.kind = GroupKind::symmetric;
  } else if (kind == "sl_mod") {
    spec.kind = GroupKind::sl_mod;
    want = 3;
  } else {
    throw std::invalid_argument("group spec: unknown kind '" + std::string(kind) + "'");
  }
  if (parts.size() != want) {
    throw std::invalid_argument("group spec: '" + std::string(text) + "' has the wrong number of parameters");
  }
  spec.n = parse_int(parts[1], "n");
  if (want == 3) spec.k = parse_int(parts[2], "k");
  model_for(spec);  // validates the parameters
  return spec;
}

GroupEnumeration enumerate_group(const GroupSpec& spec, std::size_t cap) {
  Enumerated e = enumerate(spec, cap);
  return {std::move(e.elements), std::move(e.model.labels), std::move(e.model.inverse_labels)};
}

PermutationAction action_from_group(const GroupSpec& spec, std::span<const int> subgroup,
                                    std::size_t cap) {
  const Enumerated e = enumerate(spec, cap);
  const auto& model = e.model;
  const int order = static_cast<int>(e.elements.size());
  for (std::size_t g = 0; g < model.generators.size(); ++g) {
    if (model.generators[g] == model.identity) {
      throw std::invalid_argument(spec.to_string() + ": generator " + model.labels[g] +
                                  " is the identity");
    }
  }

  // Close the subgroup under multiplication.
  std::vector<char> in_h(static_cast<std::size_t>(order), 0);
  std::vector<int> members{0};
  in_h[0] = 1;
  for (int idx : subgroup) {
    if (idx < 0 || idx >= order) {
      throw std::invalid_argument("subgroup index " + std::to_string(idx) + " out of range");
    }
  }
  for (std::size_t head = 0; head < members.size(); ++head) {
    for (int idx : subgroup) {
      const Element y = model.multiply(e.elements[static_cast<std::size_t>(members[head])],
                                       e.elements[static_cast<std::size_t>(idx)]);
      const int j = e.index.at(y);
      if (!in_h[static_cast<std::size_t>(j)]) {
        in_h[static_cast<std::size_t>(j)] = 1;
        members.push_back(j);
      }
    }
  }

  // Left cosets xH, numbered in breadth-first element order.
  std::vector<int> coset_of(static_cast<std::size_t>(order), -1);
  std::vector<int> representative;
  for (int x = 0; x < order; ++x) {
    if (coset_of[static_cast<std::size_t>(x)] >= 0) continue;
    const int id = static_cast<int>(representative.size());
    representative.push_back(x);
    for (int h : members) {
      const Element xh = model.multiply(e.elements[static_cast<std::size_t>(x)],
                                        e.elements[static_cast<std::size_t>(h)]);
      coset_of[static_cast<std::size_t>(e.index.at(xh))] = id;
    }
  }

  const int m = static_cast<int>(representative.size());
  std::vector<Generator> gens;
  for (std::size_t g = 0; g < model.generators.size(); ++g) {
    Generator gen{model.labels[g], model.inverse_labels[g], std::vector<int>(static_cast<std::size_t>(m))};
    for (int c = 0; c < m; ++c) {
      const Element y = model.multiply(model.generators[g],
                                       e.elements[static_cast<std::size_t>(representative[static_cast<std::size_t>(c)])]);
      gen.perm[static_cast<std::size_t>(c)] = coset_of[static_cast<std::size_t>(e.index.at(y))];
    }
    gens.push_back(std::move(gen));
  }
  return PermutationAction::build(m, std::move(gens));
}

std::vector<LabelMap> standard_automorphisms(const GroupSpec& spec) {
  const GroupModel model = model_for(spec);
  std::vector<LabelMap> out;
  switch (spec.kind) {
    case GroupKind::cyclic: {
      LabelMap inversion;
      for (std::size_t g = 0; g < model.labels.size(); ++g) {
        inversion[model.labels[g]] = model.inverse_labels[g];
      }
      out.push_back(std::move(inversion));
      break;
    }
    case GroupKind::boolean_cube: {
      const int n = spec.n;
      if (n < 2) {
        out.push_back({{"e0", "e0"}});
        break;
      }
      LabelMap shift;
      LabelMap swap01;
      for (int i = 0; i < n; ++i) {
        const std::string from = "e" + std::to_string(i);
        shift[from] = "e" + std::to_string((i + 1) % n);
        swap01[from] = i == 0 ? "e1" : i == 1 ? "e0" : from;
      }
      out.push_back(std::move(shift));
      out.push_back(std::move(swap01));
      break;
    }
    case GroupKind::symmetric: {
      LabelMap reversal;
      const int last = spec.n - 2;
      for (int i = 0; i <= last; ++i) {
        reversal["t" + std::to_string(i)] = "t" + std::to_string(last - i);
      }
      out.push_back(std::move(reversal));
      break;
    }
    case GroupKind::sl_mod: {
      // Conjugation by the permutation matrix of pi sends E_ij to E_pi(i)pi(j).
      const int n = spec.n;
      auto conjugation = [&](const std::vector<int>& pi) {
        LabelMap map;
        for (const std::string& label : model.labels) {
          const int i = label[1] - '0';
          const int j = label[2] - '0';
          map[label] = "E" + std::to_string(pi[static_cast<std::size_t>(i)]) +
                       std::to_string(pi[static_cast<std::size_t>(j)]) + label.substr(3);
        }
        return map;
      };
      std::vector<int> cycle(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) cycle[static_cast<std::size_t>(i)] = (i + 1) % n;
      std::vector<int> swap(static_cast<std::size_t>(n));
      std::iota(swap.begin(), swap.end(), 0);
      std::swap(swap[0], swap[1]);
      out.push_back(conjugation(cycle));
      out.push_back(conjugation(swap));
      break;
    }
  }
  return out;
}

}  // namespace bgap
