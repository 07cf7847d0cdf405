#include "horohyp/rays.hpp"

#include <algorithm>

#include "horohyp/engine.hpp"
#include "horohyp/util.hpp"

namespace horohyp {

namespace {

std::vector<int> parse_word(const CayleyStructure& c, const std::string& word) {
  std::vector<int> out;
  for (char ch : word) out.push_back(c.gen_by_label(std::string(1, ch)));
  return out;
}

std::string print_word(const CayleyStructure& c, const std::vector<int>& gens) {
  std::string out;
  for (int g : gens) out += c.gen_label(g);
  return out;
}

}  // namespace

RefRay RefRay::parse(const Family& fam, const std::string& text) {
  RefRay r;
  std::string t = trim(text);
  require(!t.empty(), Err::Parse, "empty ray description");
  if (t[0] == '@') {
    auto names = fam.boundary_point_names();
    require(std::find(names.begin(), names.end(), t) != names.end(), Err::Parse,
            "family " + fam.spec.kind_name() + " has no boundary point " + t);
    r.kind_ = Kind::Named;
    r.named_ = t;
    r.origin_ = fam.o().base_point();
    return r;
  }
  if (t.rfind("seq:", 0) == 0) {
    r.kind_ = Kind::ExplicitSeq;
    for (const auto& part : split(t.substr(4), ' '))
      if (!trim(part).empty()) r.seq_.push_back(fam.o().vertex(trim(part)));
    require(!r.seq_.empty(), Err::Parse, "explicit ray needs at least one vertex");
    r.origin_ = r.seq_.front();
    return r;
  }
  if (t.find('|') != std::string::npos) {
    auto parts = split(t, '|');
    require(parts.size() == 3, Err::Parse, "periodic ray must look like origin|prefix|period");
    const CayleyStructure* c = fam.o().cayley();
    require(c != nullptr, Err::NotCayley, "periodic generator words need a Cayley family");
    r.kind_ = Kind::Periodic;
    r.origin_ = fam.o().vertex(trim(parts[0]).empty() ? "e" : trim(parts[0]));
    r.prefix_gens_ = parse_word(*c, trim(parts[1]));
    r.period_gens_ = parse_word(*c, trim(parts[2]));
    require(!r.period_gens_.empty(), Err::Parse, "periodic ray needs a nonempty period");
    return r;
  }
  // free-group named periodic points: "a^inf"
  if (t.size() > 4 && t.substr(t.size() - 4) == "^inf") {
    const CayleyStructure* c = fam.o().cayley();
    require(c != nullptr, Err::NotCayley, "named periodic points need a Cayley family");
    r.kind_ = Kind::Periodic;
    r.origin_ = fam.o().base_point();
    r.period_gens_ = parse_word(*c, t.substr(0, t.size() - 4));
    return r;
  }
  fail(Err::Parse, "unrecognized ray description: " + text);
}

VertexId RefRay::at(const Family& fam, int n) const {
  switch (kind_) {
    case Kind::ExplicitSeq: {
      require(n >= 0 && n < static_cast<int>(seq_.size()), Err::HorizonTooSmall,
              "explicit ray has no index " + std::to_string(n));
      return seq_[n];
    }
    case Kind::Periodic: {
      const CayleyStructure* c = fam.o().cayley();
      VertexId v = origin_;
      for (int i = 0; i < n; ++i) {
        int g = i < static_cast<int>(prefix_gens_.size())
                    ? prefix_gens_[i]
                    : period_gens_[(i - prefix_gens_.size()) % period_gens_.size()];
        v = c->apply(v, g);
      }
      return v;
    }
    case Kind::Named: break;
  }
  switch (fam.spec.kind) {
    case FamilyKind::BadLadderI:
    case FamilyKind::BadLadderII:
      return fam.o().vertex("x" + std::to_string(n + 1));
    case FamilyKind::ZLadder:
      return fam.o().vertex(std::to_string(named_ == "@eta-" ? -(long)n : (long)n) + ",0");
    case FamilyKind::A2TildeChamber: {
      static const int dirs[6][2] = {{0, 1}, {0, 2}, {1, 0}, {1, 2}, {2, 0}, {2, 1}};
      int k = named_[4] - '0';
      long coord[3] = {0, 0, 0};
      coord[dirs[k][0]] = (n + 1) / 2;
      coord[dirs[k][1]] = -(n / 2);
      return fam.o().vertex(std::to_string(coord[0]) + "," + std::to_string(coord[1]) + "," +
                            std::to_string(coord[2]));
    }
    default: fail(Err::Internal, "named ray on a family without named points");
  }
}

RefRay RefRay::translated(const Family& fam, VertexId g) const {
  const CayleyStructure* c = fam.o().cayley();
  require(c != nullptr, Err::NotCayley, "translating rays needs a Cayley family");
  RefRay out;
  switch (kind_) {
    case Kind::Periodic:
      out.kind_ = Kind::Periodic;
      out.origin_ = c->mul(g, origin_);
      out.prefix_gens_ = prefix_gens_;
      out.period_gens_ = period_gens_;
      return out;
    case Kind::Named: {
      require(fam.spec.kind == FamilyKind::ZLadder, Err::NotCayley,
              "named point on a non-Cayley family cannot be translated");
      out.kind_ = Kind::Periodic;
      out.origin_ = c->mul(g, origin_);
      out.period_gens_ = {named_ == "@eta-" ? 1 : 0};  // T or t
      return out;
    }
    case Kind::ExplicitSeq:
      out.kind_ = Kind::ExplicitSeq;
      for (VertexId v : seq_) out.seq_.push_back(c->mul(g, v));
      out.origin_ = out.seq_.front();
      return out;
  }
  fail(Err::Internal, "bad ray kind");
}

std::string RefRay::text(const Family& fam) const {
  switch (kind_) {
    case Kind::Named: return named_;
    case Kind::Periodic: {
      const CayleyStructure* c = fam.o().cayley();
      return fam.o().name(origin_) + "|" + print_word(*c, prefix_gens_) + "|" +
             print_word(*c, period_gens_);
    }
    case Kind::ExplicitSeq: {
      std::string out = "seq:";
      for (std::size_t i = 0; i < seq_.size(); ++i) {
        if (i) out += ' ';
        out += fam.o().name(seq_[i]);
      }
      return out;
    }
  }
  return "?";
}

// ---------------------------------------------------------------- module ops

VertexId reference_vertex(Engine& eng, int n) { return eng.refv(n); }

std::vector<CgrPrefix> enumerate_cgr_prefixes(Engine& eng, VertexId x) { return eng.prefixes(x); }

CertifiedSet geo_window(Engine& eng, VertexId x) { return eng.geo_persistence(x); }

FellowTravelReport fellow_travel_audit(Engine& eng, VertexId x, int delta) {
  FellowTravelReport rep;
  rep.bound = 2 * delta;
  const auto& ps = eng.prefixes(x);
  rep.prefix_count = ps.size();
  for (std::size_t a = 0; a < ps.size(); ++a)
    for (std::size_t b = a + 1; b < ps.size(); ++b) {
      std::size_t len = std::min(ps[a].verts.size(), ps[b].verts.size());
      for (std::size_t i = 0; i < len; ++i) {
        int d = static_cast<int>(eng.dist(ps[a].verts[i], ps[b].verts[i]));
        rep.max_deviation = std::max(rep.max_deviation, d);
      }
    }
  rep.pass = rep.max_deviation <= rep.bound;
  return rep;
}

}  // namespace horohyp
