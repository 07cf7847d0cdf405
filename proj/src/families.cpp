#include "horohyp/families.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

#include "horohyp/util.hpp"

namespace horohyp {
namespace {

template <class Repr>
class Interner {
 public:
  VertexId id(const Repr& r) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = ids_.find(r);
    if (it != ids_.end()) return it->second;
    VertexId v = static_cast<VertexId>(reprs_.size());
    reprs_.push_back(r);
    ids_.emplace(r, v);
    return v;
  }
  Repr repr(VertexId v) const {
    std::lock_guard<std::mutex> lock(mu_);
    require(v < reprs_.size(), Err::Internal, "dangling vertex handle");
    return reprs_[v];
  }

 private:
  mutable std::mutex mu_;
  mutable std::vector<Repr> reprs_;
  mutable std::map<Repr, VertexId> ids_;
};

// ---------------------------------------------------------------- free group

std::string reduce_word(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (!out.empty() && out.back() != c &&
        std::tolower(out.back()) == std::tolower(static_cast<unsigned char>(c)))
      out.pop_back();
    else
      out.push_back(c);
  }
  return out;
}

std::string invert_word(const std::string& s) {
  std::string out;
  for (auto it = s.rbegin(); it != s.rend(); ++it)
    out.push_back(std::isupper(static_cast<unsigned char>(*it)) ? std::tolower(*it) : std::toupper(*it));
  return out;
}

class FreeGroupOracle final : public AdjacencyOracle, public CayleyStructure {
 public:
  explicit FreeGroupOracle(int rank) : rank_(rank) {
    require(rank >= 1 && rank <= 8, Err::Parse, "free group rank must be in [1,8]");
    for (int i = 0; i < rank_; ++i) {
      labels_.push_back(std::string(1, static_cast<char>('a' + i)));
      labels_.push_back(std::string(1, static_cast<char>('A' + i)));
    }
  }

  std::string family_name() const override { return "free_group"; }
  int degree_bound() const override { return 2 * rank_; }
  VertexId base_point() const override { return tab_.id(""); }
  std::optional<int> delta_bound() const override { return 0; }

  std::vector<VertexId> neighbors(VertexId v) const override {
    std::vector<VertexId> out;
    for (int g = 0; g < num_gens(); ++g) out.push_back(apply(v, g));
    return out;
  }
  std::string name(VertexId v) const override {
    std::string w = tab_.repr(v);
    return w.empty() ? "e" : w;
  }
  VertexId vertex(const std::string& s) const override {
    if (s == "e") return tab_.id("");
    for (char c : s) {
      char low = std::tolower(static_cast<unsigned char>(c));
      require(low >= 'a' && low < 'a' + rank_, Err::Parse,
              "letter '" + std::string(1, c) + "' is not a generator of F_" + std::to_string(rank_));
    }
    return tab_.id(reduce_word(s));
  }
  bool less(VertexId a, VertexId b) const override { return cmp_shortlex(a, b) == Cmp::LT; }
  std::optional<long> exact_dist(VertexId u, VertexId v) const override {
    std::string a = tab_.repr(u), b = tab_.repr(v);
    std::size_t p = 0;
    while (p < a.size() && p < b.size() && a[p] == b[p]) ++p;
    return static_cast<long>(a.size() + b.size() - 2 * p);
  }
  const CayleyStructure* cayley() const override { return this; }
  CayleyStructure* cayley_mut() override { return this; }

  // CayleyStructure
  int num_gens() const override { return 2 * rank_; }
  const std::string& gen_label(int i) const override { return labels_[i]; }
  int gen_inverse(int i) const override { return i ^ 1; }
  VertexId identity() const override { return tab_.id(""); }
  VertexId apply(VertexId v, int gen) const override {
    std::string w = tab_.repr(v);
    w.push_back(labels_[gen][0]);
    return tab_.id(reduce_word(w));
  }
  VertexId mul(VertexId a, VertexId b) const override {
    return tab_.id(reduce_word(tab_.repr(a) + tab_.repr(b)));
  }
  VertexId inv(VertexId a) const override { return tab_.id(invert_word(tab_.repr(a))); }
  std::vector<int> word(VertexId v) const override {
    std::vector<int> out;
    for (char c : tab_.repr(v)) {
      bool up = std::isupper(static_cast<unsigned char>(c));
      int letter = std::tolower(static_cast<unsigned char>(c)) - 'a';
      out.push_back(2 * letter + (up ? 1 : 0));
    }
    return out;
  }

  int rank_;
  std::vector<std::string> labels_;
  Interner<std::string> tab_;
};

// ---------------------------------------------------------------- Z-ladder

// Cayley graph of Z x C2 with generators t, t^-1, s: two rails plus rungs.
class ZLadderOracle final : public AdjacencyOracle, public CayleyStructure {
 public:
  using Repr = std::pair<long, int>;
  ZLadderOracle() : labels_{"t", "T", "s"} {}

  std::string family_name() const override { return "z_ladder"; }
  int degree_bound() const override { return 3; }
  VertexId base_point() const override { return tab_.id({0, 0}); }
  std::optional<int> delta_bound() const override { return 1; }

  std::vector<VertexId> neighbors(VertexId v) const override {
    return {apply(v, 0), apply(v, 1), apply(v, 2)};
  }
  std::string name(VertexId v) const override {
    auto [m, i] = tab_.repr(v);
    return std::to_string(m) + "," + std::to_string(i);
  }
  VertexId vertex(const std::string& s) const override {
    auto parts = split(s, ',');
    long m = 0, i = 0;
    require(parts.size() == 2 && parse_int(trim(parts[0]), m) && parse_int(trim(parts[1]), i) &&
                (i == 0 || i == 1),
            Err::Parse, "z_ladder vertex must look like 'm,i' with i in {0,1}: " + s);
    return tab_.id({m, static_cast<int>(i)});
  }
  bool less(VertexId a, VertexId b) const override { return cmp_shortlex(a, b) == Cmp::LT; }
  std::optional<long> exact_dist(VertexId u, VertexId v) const override {
    auto [m, i] = tab_.repr(u);
    auto [m2, i2] = tab_.repr(v);
    return std::labs(m - m2) + (i == i2 ? 0 : 1);
  }
  const CayleyStructure* cayley() const override { return this; }
  CayleyStructure* cayley_mut() override { return this; }

  int num_gens() const override { return 3; }
  const std::string& gen_label(int i) const override { return labels_[i]; }
  int gen_inverse(int i) const override { return i == 2 ? 2 : 1 - i; }
  VertexId identity() const override { return tab_.id({0, 0}); }
  VertexId apply(VertexId v, int gen) const override {
    auto [m, i] = tab_.repr(v);
    if (gen == 0) return tab_.id({m + 1, i});
    if (gen == 1) return tab_.id({m - 1, i});
    return tab_.id({m, 1 - i});
  }
  VertexId mul(VertexId a, VertexId b) const override {
    auto [m, i] = tab_.repr(a);
    auto [m2, i2] = tab_.repr(b);
    return tab_.id({m + m2, i ^ i2});
  }
  VertexId inv(VertexId a) const override {
    auto [m, i] = tab_.repr(a);
    return tab_.id({-m, i});
  }
  std::vector<int> word(VertexId v) const override {
    auto [m, i] = tab_.repr(v);
    std::vector<int> out(static_cast<std::size_t>(std::labs(m)), m > 0 ? 0 : 1);
    if (i) out.push_back(2);
    return out;
  }

  Repr repr(VertexId v) const { return tab_.repr(v); }
  VertexId at(long m, int i) const { return tab_.id({m, i}); }

  std::vector<std::string> labels_;
  Interner<Repr> tab_;
};

// ---------------------------------------------------------------- bad ladders

// Rung patterns reconstructed by calibration against the published set
// identities; the figures themselves are not machine-readable.
//   I : x-rail, y-rail, rungs z_n ~ x_n and z_n ~ y_n.
//   II: x-rail, y-rail, z_n ~ x_n, z_n ~ y_{n+1}, and z_n ~ y_{n-1} for even n.
class LadderOracle final : public AdjacencyOracle {
 public:
  using Repr = std::pair<char, long>;
  explicit LadderOracle(bool second) : second_(second) {}

  std::string family_name() const override { return second_ ? "bad_ladder_2" : "bad_ladder_1"; }
  int degree_bound() const override { return second_ ? 4 : 3; }
  VertexId base_point() const override { return tab_.id({'x', 1}); }
  std::optional<int> delta_bound() const override { return 2; }

  std::vector<VertexId> neighbors(VertexId v) const override {
    auto [k, n] = tab_.repr(v);
    std::vector<VertexId> out;
    auto add = [&](char kk, long nn) {
      if (nn >= 1) out.push_back(tab_.id({kk, nn}));
    };
    if (k == 'x' || k == 'y') {
      add(k, n - 1);
      add(k, n + 1);
    }
    if (!second_) {
      if (k == 'x' || k == 'y') add('z', n);
      if (k == 'z') {
        add('x', n);
        add('y', n);
      }
    } else {
      if (k == 'x') add('z', n);
      if (k == 'y') {
        add('z', n - 1);
        if (n % 2 == 1) add('z', n + 1);
      }
      if (k == 'z') {
        add('x', n);
        add('y', n + 1);
        if (n % 2 == 0) add('y', n - 1);
      }
    }
    return out;
  }
  std::string name(VertexId v) const override {
    auto [k, n] = tab_.repr(v);
    return std::string(1, k) + std::to_string(n);
  }
  VertexId vertex(const std::string& s) const override {
    long n = 0;
    require(s.size() >= 2 && (s[0] == 'x' || s[0] == 'y' || s[0] == 'z') &&
                parse_int(s.substr(1), n) && n >= 1,
            Err::Parse, "ladder vertex must look like x3 / y1 / z10: " + s);
    return tab_.id({s[0], n});
  }
  bool less(VertexId a, VertexId b) const override {
    auto ra = tab_.repr(a), rb = tab_.repr(b);
    return std::tie(ra.second, ra.first) < std::tie(rb.second, rb.first);
  }

  Repr repr(VertexId v) const { return tab_.repr(v); }
  VertexId at(char k, long n) const { return tab_.id({k, n}); }
  bool second() const { return second_; }

 private:
  bool second_;
  Interner<Repr> tab_;
};

// ---------------------------------------------------------------- A2 chambers

// Chamber graph of the equilateral-triangle tiling of the plane. Chambers
// are encoded as (a,b,c) with a+b+c in {0,1}; crossing a wall moves one
// coordinate by 1, and the gallery metric is the L1 distance.
class A2Oracle final : public AdjacencyOracle {
 public:
  using Repr = std::tuple<long, long, long>;

  std::string family_name() const override { return "a2_chamber"; }
  int degree_bound() const override { return 3; }
  VertexId base_point() const override { return tab_.id({0, 0, 0}); }

  std::vector<VertexId> neighbors(VertexId v) const override {
    auto [a, b, c] = tab_.repr(v);
    int step = (a + b + c == 0) ? 1 : -1;
    return {tab_.id({a + step, b, c}), tab_.id({a, b + step, c}), tab_.id({a, b, c + step})};
  }
  std::string name(VertexId v) const override {
    auto [a, b, c] = tab_.repr(v);
    return std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c);
  }
  VertexId vertex(const std::string& s) const override {
    auto parts = split(s, ',');
    long a = 0, b = 0, c = 0;
    require(parts.size() == 3 && parse_int(trim(parts[0]), a) && parse_int(trim(parts[1]), b) &&
                parse_int(trim(parts[2]), c) && (a + b + c == 0 || a + b + c == 1),
            Err::Parse, "chamber must be 'a,b,c' with a+b+c in {0,1}: " + s);
    return tab_.id({a, b, c});
  }
  bool less(VertexId u, VertexId v) const override { return tab_.repr(u) < tab_.repr(v); }
  std::optional<long> exact_dist(VertexId u, VertexId v) const override {
    auto [a, b, c] = tab_.repr(u);
    auto [d, e, f] = tab_.repr(v);
    return std::labs(a - d) + std::labs(b - e) + std::labs(c - f);
  }

  Repr repr(VertexId v) const { return tab_.repr(v); }
  VertexId at(long a, long b, long c) const { return tab_.id({a, b, c}); }

 private:
  Interner<Repr> tab_;
};

// ---------------------------------------------------------------- custom

class CustomOracle final : public AdjacencyOracle {
 public:
  explicit CustomOracle(const std::string& text) {
    parse(text);
    require(!base_.empty(), Err::Parse, "custom oracle needs a 'base <name>' line");
    require(adj_.count(base_), Err::Parse, "base vertex '" + base_ + "' has no edges");
    for (auto& [v, ns] : adj_) {
      std::sort(ns.begin(), ns.end());
      ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
      degree_ = std::max(degree_, static_cast<int>(ns.size()));
    }
    // connectivity from the base point
    std::vector<std::string> stack{base_};
    std::map<std::string, bool> seen{{base_, true}};
    while (!stack.empty()) {
      std::string v = stack.back();
      stack.pop_back();
      for (const auto& w : adj_.at(v))
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
    }
    for (auto& [v, ns] : adj_)
      require(seen[v], Err::Parse, "custom oracle is not connected: " + v + " unreachable");
  }

  std::string family_name() const override { return "custom"; }
  int degree_bound() const override { return degree_; }
  VertexId base_point() const override { return tab_.id(base_); }
  std::vector<VertexId> neighbors(VertexId v) const override {
    auto it = adj_.find(tab_.repr(v));
    require(it != adj_.end(), Err::Parse, "unknown vertex " + tab_.repr(v));
    std::vector<VertexId> out;
    for (const auto& w : it->second) out.push_back(tab_.id(w));
    return out;
  }
  std::string name(VertexId v) const override { return tab_.repr(v); }
  VertexId vertex(const std::string& s) const override {
    require(adj_.count(s) != 0, Err::Parse, "unknown vertex " + s);
    return tab_.id(s);
  }
  bool less(VertexId a, VertexId b) const override { return tab_.repr(a) < tab_.repr(b); }

 private:
  void parse(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    bool multtable = false;
    std::vector<std::string> gens;
    while (std::getline(is, line)) {
      line = trim(line);
      if (line.empty() || line[0] == '#') continue;
      std::istringstream ls(line);
      std::string head;
      ls >> head;
      if (head == "base") {
        ls >> base_;
        continue;
      }
      if (head == "generators") {
        multtable = true;
        std::string g;
        while (ls >> g) gens.push_back(g);
        require(!gens.empty(), Err::Parse, "multiplication table needs generators");
        continue;
      }
      if (!multtable) {
        std::string u = head, v;
        ls >> v;
        require(!v.empty(), Err::Parse, "edge line must be 'u v': " + line);
        require(u != v, Err::Parse, "self-loop rejected: " + line);
        adj_[u].push_back(v);
        adj_[v].push_back(u);
      } else {
        std::string a = head, g, prod;
        ls >> g >> prod;
        require(!prod.empty(), Err::Parse, "table line must be 'elem gen product': " + line);
        require(std::find(gens.begin(), gens.end(), g) != gens.end(), Err::Parse,
                "unknown generator in table: " + g);
        require(a != prod, Err::Parse, "self-loop rejected: " + line);
        adj_[a].push_back(prod);
        adj_[prod].push_back(a);
      }
    }
  }

  std::map<std::string, std::vector<std::string>> adj_;
  std::string base_;
  int degree_ = 0;
  Interner<std::string> tab_;
};

}  // namespace

// ---------------------------------------------------------------- FamilySpec

FamilyKind FamilySpec::kind_from_name(const std::string& name) {
  if (name == "free_group") return FamilyKind::FreeGroup;
  if (name == "z_ladder") return FamilyKind::ZLadder;
  if (name == "bad_ladder_1") return FamilyKind::BadLadderI;
  if (name == "bad_ladder_2") return FamilyKind::BadLadderII;
  if (name == "a2_chamber") return FamilyKind::A2TildeChamber;
  if (name == "custom") return FamilyKind::Custom;
  fail(Err::Parse, "unknown family: " + name);
}

std::string FamilySpec::kind_name() const {
  switch (kind) {
    case FamilyKind::FreeGroup: return "free_group";
    case FamilyKind::ZLadder: return "z_ladder";
    case FamilyKind::BadLadderI: return "bad_ladder_1";
    case FamilyKind::BadLadderII: return "bad_ladder_2";
    case FamilyKind::A2TildeChamber: return "a2_chamber";
    case FamilyKind::Custom: return "custom";
  }
  return "?";
}

FamilySpec FamilySpec::from_json(const nlohmann::json& j) {
  FamilySpec s;
  require(j.contains("family"), Err::Parse, "family spec needs a 'family' field");
  s.kind = kind_from_name(j.at("family").get<std::string>());
  if (j.contains("rank")) s.rank = j.at("rank").get<int>();
  if (j.contains("order_on_S")) s.order_on_S = j.at("order_on_S").get<std::vector<std::string>>();
  if (j.contains("custom_text")) s.custom_text = j.at("custom_text").get<std::string>();
  return s;
}

nlohmann::ordered_json FamilySpec::to_json() const {
  nlohmann::ordered_json j;
  j["family"] = kind_name();
  if (kind == FamilyKind::FreeGroup) j["rank"] = rank;
  if (!order_on_S.empty()) j["order_on_S"] = order_on_S;
  return j;
}

// ---------------------------------------------------------------- Family

std::vector<std::string> Family::boundary_point_names() const {
  switch (spec.kind) {
    case FamilyKind::FreeGroup: {
      std::vector<std::string> out;
      const CayleyStructure* c = oracle->cayley();
      for (int g = 0; g < c->num_gens(); ++g) out.push_back(c->gen_label(g) + "^inf");
      return out;
    }
    case FamilyKind::ZLadder: return {"@eta+", "@eta-"};
    case FamilyKind::BadLadderI:
    case FamilyKind::BadLadderII: return {"@eta"};
    case FamilyKind::A2TildeChamber:
      return {"@dir0", "@dir1", "@dir2", "@dir3", "@dir4", "@dir5"};
    case FamilyKind::Custom:
      fail(Err::NotEnumerable, "custom oracles have no enumerable boundary points");
  }
  return {};
}

std::vector<char> Family::exact_class_tags(const std::string& eta) const {
  switch (spec.kind) {
    case FamilyKind::FreeGroup: return {'*'};
    case FamilyKind::ZLadder:
      if (eta == "@eta+" || eta == "@eta-") return {'b', 't'};
      return {};
    case FamilyKind::BadLadderI:
    case FamilyKind::BadLadderII:
      if (eta == "@eta") return {'x', 'y'};
      return {};
    default: return {};
  }
}

std::optional<int> Family::exact_xi_count(const std::string& eta) const {
  auto tags = exact_class_tags(eta);
  if (tags.empty()) return std::nullopt;
  return static_cast<int>(tags.size());
}

std::optional<char> Family::classify_trace(
    const std::string& eta, const std::function<long(const std::string&)>& value_at) const {
  using Probe = std::vector<std::pair<const char*, long>>;
  std::vector<std::pair<char, Probe>> probes;
  switch (spec.kind) {
    case FamilyKind::FreeGroup: return '*';
    case FamilyKind::BadLadderI:
      probes = {{'x', {{"y1", 2}, {"z1", 1}}}, {'y', {{"y1", -2}, {"z1", -1}}}};
      break;
    case FamilyKind::BadLadderII:
      probes = {{'x', {{"y1", 1}, {"z1", 1}}}, {'y', {{"y1", -1}, {"z1", -1}}}};
      break;
    case FamilyKind::ZLadder:
      if (eta != "@eta+" && eta != "@eta-") return std::nullopt;
      probes = {{'b', {{"0,1", 1}}}, {'t', {{"0,1", -1}}}};
      break;
    default: return std::nullopt;
  }
  std::optional<char> hit;
  for (auto& [tag, probe] : probes) {
    bool all = true;
    for (auto& [name, want] : probe)
      if (value_at(name) != want) {
        all = false;
        break;
      }
    if (all) {
      if (hit) return std::nullopt;  // ambiguous
      hit = tag;
    }
  }
  return hit;
}

bool Family::exact_special(const std::string& eta, VertexId v, bool& is_special, char& cls) const {
  if (spec.kind == FamilyKind::FreeGroup) {
    is_special = true;
    cls = '*';
    return true;
  }
  if (spec.kind == FamilyKind::ZLadder && (eta == "@eta+" || eta == "@eta-")) {
    auto* o = dynamic_cast<const ZLadderOracle*>(oracle.get());
    is_special = true;
    cls = o->repr(v).second ? 't' : 'b';
    return true;
  }
  if ((spec.kind == FamilyKind::BadLadderI || spec.kind == FamilyKind::BadLadderII) &&
      eta == "@eta") {
    auto* o = dynamic_cast<const LadderOracle*>(oracle.get());
    char k = o->repr(v).first;
    if (spec.kind == FamilyKind::BadLadderI) {
      is_special = (k != 'z');
      cls = (k == 'x') ? 'x' : 'y';
    } else {
      is_special = true;
      cls = (k == 'x') ? 'x' : 'y';
    }
    return true;
  }
  return false;
}

std::optional<std::function<bool(VertexId)>> Family::exact_set(SetKind k, const std::string& eta,
                                                               VertexId base, char cls) const {
  if (spec.kind == FamilyKind::ZLadder && (eta == "@eta+" || eta == "@eta-")) {
    auto* o = dynamic_cast<const ZLadderOracle*>(oracle.get());
    auto [a, i] = o->repr(base);
    bool plus = (eta == "@eta+");
    auto side = [plus, a](long m) { return plus ? m >= a : m <= a; };
    if (k == SetKind::Geo || k == SetKind::Geo1)
      return [o, side](VertexId v) { return side(o->repr(v).first); };
    // sector: own rail only when based on that rail, everything otherwise
    int rail = (cls == 't') ? 1 : 0;
    bool own = (i == rail);
    return [o, side, own, rail](VertexId v) {
      auto [m, j] = o->repr(v);
      return side(m) && (!own || j == rail);
    };
  }
  if ((spec.kind != FamilyKind::BadLadderI && spec.kind != FamilyKind::BadLadderII) ||
      eta != "@eta")
    return std::nullopt;
  auto* o = dynamic_cast<const LadderOracle*>(oracle.get());
  auto [bk, m] = o->repr(base);
  if (spec.kind == FamilyKind::BadLadderI) {
    switch (k) {
      case SetKind::Geo:
        if (bk == 'z')
          return [o, m](VertexId v) {
            auto [vk, n] = o->repr(v);
            return vk == 'z' ? n == m : n >= m;
          };
        return [o, m](VertexId v) { return o->repr(v).second >= m; };
      case SetKind::Geo1:
        return [o, m](VertexId v) {
          auto [vk, n] = o->repr(v);
          return vk != 'z' && n >= m;
        };
      case SetKind::Sector:
        if (bk == 'z')
          return [o, m, cls](VertexId v) {
            auto [vk, n] = o->repr(v);
            return (vk == 'z' && n == m) || (vk == cls && n >= m);
          };
        if (bk == cls)
          return [o, m, cls](VertexId v) {
            auto [vk, n] = o->repr(v);
            return vk == cls && n >= m;
          };
        return [o, m](VertexId v) { return o->repr(v).second >= m; };
    }
  }
  // BadLadderII: closed forms for the x-rail sector at any base, and for
  // everything at the calibrated bases x1, y1, z1.
  if (k == SetKind::Sector && bk == 'x' && cls == 'x')
    return [o, m](VertexId v) {
      auto [vk, n] = o->repr(v);
      return vk == 'x' && n >= m;
    };
  if (m != 1) return std::nullopt;
  auto evenz = [o](VertexId v) {
    auto [vk, n] = o->repr(v);
    return vk == 'z' && n % 2 == 0;
  };
  auto kind_of = [o](VertexId v) { return o->repr(v).first; };
  auto idx_of = [o](VertexId v) { return o->repr(v).second; };
  if (bk == 'x') {
    if (k == SetKind::Geo || (k == SetKind::Sector && cls == 'y'))
      return [kind_of, idx_of](VertexId v) { return !(kind_of(v) == 'y' && idx_of(v) == 1); };
    if (k == SetKind::Geo1)
      return [kind_of, idx_of, evenz](VertexId v) {
        char vk = kind_of(v);
        long n = idx_of(v);
        return vk == 'x' || (vk == 'y' && n >= 2) || (vk == 'z' && n == 1) ||
               (evenz(v) && n >= 4);
      };
  }
  if (bk == 'y') {
    auto geo_y1 = [kind_of, idx_of, evenz](VertexId v) {
      char vk = kind_of(v);
      return (vk == 'x' && idx_of(v) >= 2) || vk == 'y' || evenz(v);
    };
    if (k == SetKind::Geo || k == SetKind::Geo1 || (k == SetKind::Sector && cls == 'x'))
      return geo_y1;
    return [kind_of, evenz](VertexId v) { return kind_of(v) == 'y' || evenz(v); };
  }
  if (bk == 'z') {
    if (k == SetKind::Geo || (k == SetKind::Sector && cls == 'x'))
      return [kind_of, idx_of, evenz](VertexId v) {
        char vk = kind_of(v);
        long n = idx_of(v);
        return (vk == 'z' && n == 1) || vk == 'x' || (vk == 'y' && n >= 2) ||
               (evenz(v) && n >= 4);
      };
    if (k == SetKind::Sector)
      return [kind_of, idx_of, evenz](VertexId v) {
        char vk = kind_of(v);
        long n = idx_of(v);
        return (vk == 'z' && n == 1) || (vk == 'y' && n >= 2) || (evenz(v) && n >= 4);
      };
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- build

namespace {

void ladder_spot_checks(const Family& fam) {
  Window w(fam.oracle, fam.o().base_point(), 8);
  auto v = [&](const char* n) { return fam.o().vertex(n); };
  auto check = [&](const char* a, const char* b, long want) {
    long got = w.dist_bfs(v(a), v(b));
    require(got == want, Err::CalibrationFailed,
            std::string("dist(") + a + "," + b + ") = " + std::to_string(got) + ", expected " +
                std::to_string(want) + " in " + fam.o().family_name());
  };
  if (fam.spec.kind == FamilyKind::BadLadderI) {
    check("x1", "y1", 2);
    check("x1", "z1", 1);
    check("z1", "x3", 3);
    check("x1", "y3", 4);
    check("z1", "z3", 4);
  } else {
    check("x1", "y1", 3);
    check("x1", "z2", 2);
    check("z1", "y5", 4);
    check("y1", "z2", 1);
    check("y1", "x2", 2);
    check("z1", "z2", 3);
  }
}

}  // namespace

Family build_family(const FamilySpec& spec) {
  std::shared_ptr<AdjacencyOracle> oracle;
  switch (spec.kind) {
    case FamilyKind::FreeGroup: oracle = std::make_shared<FreeGroupOracle>(spec.rank); break;
    case FamilyKind::ZLadder: oracle = std::make_shared<ZLadderOracle>(); break;
    case FamilyKind::BadLadderI: oracle = std::make_shared<LadderOracle>(false); break;
    case FamilyKind::BadLadderII: oracle = std::make_shared<LadderOracle>(true); break;
    case FamilyKind::A2TildeChamber: oracle = std::make_shared<A2Oracle>(); break;
    case FamilyKind::Custom: oracle = std::make_shared<CustomOracle>(spec.custom_text); break;
  }
  if (!spec.order_on_S.empty()) {
    CayleyStructure* c = oracle->cayley_mut();
    require(c != nullptr, Err::NotCayley, spec.kind_name() + " has no generator order to configure");
    c->set_order(spec.order_on_S);
  }
  Family fam;
  fam.spec = spec;
  fam.oracle = oracle;
  if (spec.kind == FamilyKind::BadLadderI || spec.kind == FamilyKind::BadLadderII)
    ladder_spot_checks(fam);
  return fam;
}

}  // namespace horohyp
