#include "doctest.h"

#include <set>

#include "horohyp/engine.hpp"
#include "horohyp/horo.hpp"

using namespace horohyp;

namespace {

Engine make(FamilyKind kind, const std::string& ray, Horizon h) {
  Family f = build_family({.kind = kind});
  return Engine(f, RefRay::parse(f, ray), h);
}

Engine bl1() { return make(FamilyKind::BadLadderI, "@eta", {32, 6, -1}); }
Engine bl2() { return make(FamilyKind::BadLadderII, "@eta", {32, 6, -1}); }

int cls_of(Engine& e, char tag) {
  for (const auto& c : e.xi())
    if (c.family_tag == tag) return c.id;
  FAIL("no class tagged ", tag);
  return -1;
}

std::set<std::string> name_set(Engine& e, const std::vector<VertexId>& v) {
  auto ns = e.family().o().names(v);
  return {ns.begin(), ns.end()};
}

VertexId v(Engine& e, const std::string& s) { return e.family().o().vertex(s); }

}  // namespace

TEST_CASE("horotrace_of_prefix: examples and invariants") {
  Engine e = make(FamilyKind::FreeGroup, "e||a", {20, 4, -1});
  std::vector<VertexId> prefix;
  std::string w;
  prefix.push_back(v(e, "e"));
  for (int i = 0; i < 12; ++i) {
    w += 'a';
    prefix.push_back(v(e, w));
  }
  HoroTrace t = horotrace_of_prefix(e, prefix, {v(e, "e"), v(e, "a")});
  CHECK(t.value_at(v(e, "e")) == 0);
  CHECK(t.value_at(v(e, "a")) == -1);

  // 1-Lipschitz and zero at the base point, on a larger observation set
  Engine b = bl1();
  std::vector<VertexId> rail;
  for (int n = 1; n <= 28; ++n) rail.push_back(v(b, "x" + std::to_string(n)));
  HoroTrace tb = horotrace_of_prefix(b, rail, b.ball(v(b, "x1"), 4));
  CHECK(tb.value_at(v(b, "x1")) == 0);
  CHECK(tb.value_at(v(b, "y1")) == 2);  // distinguishes the two classes
  for (VertexId a : tb.obs)
    for (VertexId bb : tb.obs)
      CHECK(std::abs(tb.value_at(a) - tb.value_at(bb)) <= b.dist(a, bb));

  CHECK_THROWS_AS(horotrace_of_prefix(b, {v(b, "x1"), v(b, "x3")}, {v(b, "x1")}), Error);
  // too short to stabilize
  std::vector<VertexId> shorty(rail.begin(), rail.begin() + 3);
  CHECK_THROWS_AS(horotrace_of_prefix(b, shorty, {v(b, "y4")}), Error);
}

TEST_CASE("enumerate_xi: class counts") {
  Engine b1 = bl1();
  CHECK(enumerate_xi(b1).size() == 2);
  CHECK(enumerate_xi(b1)[0].cert == Cert::Exact);
  CHECK(cls_of(b1, 'x') != cls_of(b1, 'y'));

  Engine b2 = bl2();
  CHECK(enumerate_xi(b2).size() == 2);

  Engine f = make(FamilyKind::FreeGroup, "e||ab", {20, 4, -1});
  CHECK(enumerate_xi(f).size() == 1);

  Engine z = make(FamilyKind::ZLadder, "@eta+", {20, 5, -1});
  CHECK(enumerate_xi(z).size() == 2);
  CHECK(cls_of(z, 'b') != cls_of(z, 't'));

  Engine zm = make(FamilyKind::ZLadder, "@eta-", {20, 5, -1});
  CHECK(enumerate_xi(zm).size() == 2);
}

TEST_CASE("enumerate_xi refuses non-hyperbolic families") {
  Engine a = make(FamilyKind::A2TildeChamber, "@dir0", {20, 5, 4});
  try {
    enumerate_xi(a);
    FAIL("expected NotHyperbolic");
  } catch (const Error& e) {
    CHECK(e.code() == Err::NotHyperbolic);
  }
}

TEST_CASE("sector_window: published identities") {
  Engine b = bl1();
  int cx = cls_of(b, 'x'), cy = cls_of(b, 'y');

  auto qxx = sector_window(b, v(b, "x1"), cx);
  CHECK(qxx.window.cert == Cert::Exact);
  CHECK(name_set(b, qxx.window.elems) ==
        std::set<std::string>{"x1", "x2", "x3", "x4", "x5", "x6", "x7"});

  auto qxy = sector_window(b, v(b, "x1"), cy);
  CHECK(name_set(b, qxy.window.elems) == name_set(b, b.ball(v(b, "x1"), 6)));

  auto qzy = sector_window(b, v(b, "z1"), cy);
  std::set<std::string> want{"z1"};
  for (int n = 1; n <= 6; ++n) want.insert("y" + std::to_string(n));  // dist(z1,y_n) = n
  CHECK(name_set(b, qzy.window.elems) == want);

  Engine f = make(FamilyKind::FreeGroup, "e||ab", {20, 4, -1});
  auto qf = sector_window(f, v(f, "e"), 0);
  CHECK(name_set(f, qf.window.elems) == std::set<std::string>{"e", "a", "ab", "aba", "abab"});
}

TEST_CASE("sector monotonicity: y in Q(x,xi) implies Q(y,xi) inside Q(x,xi)") {
  Engine b = bl2();
  for (char tag : {'x', 'y'}) {
    int cls = cls_of(b, tag);
    const SectorData& sx = b.sector(v(b, "x1"), cls);
    for (VertexId y : sx.window.elems) {
      const SectorData& sy = b.sector(y, cls);
      for (VertexId u : sy.window.elems)
        if (b.dist(v(b, "x1"), u) <= b.horizon().R) CHECK(sx.full_set.count(u) == 1);
    }
  }
}

TEST_CASE("dist_x_xi: examples, monotonicity, bound") {
  Engine b = bl1();
  int cx = cls_of(b, 'x'), cy = cls_of(b, 'y');
  CHECK(dist_x_xi(b, v(b, "x1"), cy, v(b, "x1")) == 0);
  CHECK(dist_x_xi(b, v(b, "x1"), cy, v(b, "x2")) == 0);

  Engine f = make(FamilyKind::FreeGroup, "e||ab", {20, 4, -1});
  CHECK(dist_x_xi(f, v(f, "e"), 0, v(f, "aba")) == 0);
  CHECK(dist_x_xi(f, v(f, "e"), 0, v(f, "b")) == 2);

  // non-decreasing along every enumerated prefix; bounded by 4*delta
  Engine b8 = make(FamilyKind::BadLadderI, "@eta", {32, 6, 6});
  for (VertexId x : {v(b8, "x1"), v(b8, "z1")}) {
    for (const auto& p : b8.prefixes(x, 8)) {
      for (int cls : {cx, cy}) {
        long prev = -1;
        for (VertexId u : p.verts) {
          long d = dist_x_xi(b8, x, cls, u);
          CHECK(d >= prev);
          CHECK(d <= 4 * 2);
          prev = d;
        }
      }
    }
  }
}

TEST_CASE("is_straight_prefix") {
  Engine b = bl1();
  std::vector<VertexId> rail;
  for (int n = 1; n <= 8; ++n) rail.push_back(v(b, "x" + std::to_string(n)));
  CHECK(is_straight_prefix(b, rail).pass);

  std::vector<VertexId> cross{v(b, "z1"), v(b, "x1"), v(b, "x2")};
  auto sv = is_straight_prefix(b, cross);
  CHECK_FALSE(sv.pass);
  CHECK(sv.failing == "x1");

  Engine f = make(FamilyKind::FreeGroup, "e||ab", {20, 4, -1});
  CHECK(is_straight_prefix(f, {v(f, "e"), v(f, "a"), v(f, "ab")}).pass);
}

TEST_CASE("is_special: published verdicts") {
  Engine b = bl1();
  CHECK_FALSE(is_special(b, v(b, "z1")).pass);
  CHECK_FALSE(is_special(b, v(b, "z3")).pass);
  auto sx3 = is_special(b, v(b, "x3"));
  CHECK(sx3.pass);
  CHECK(b.xi()[sx3.cls].family_tag == 'x');
  auto sy2 = is_special(b, v(b, "y2"));
  CHECK(sy2.pass);
  CHECK(b.xi()[sy2.cls].family_tag == 'y');

  Engine b2 = bl2();
  for (const char* s : {"x1", "x2", "y1", "y3", "z1", "z2", "z3", "z4"}) {
    auto sv = is_special(b2, v(b2, s));
    CHECK_MESSAGE(sv.pass, "vertex ", s);
    CHECK(b2.xi()[sv.cls].family_tag == (s[0] == 'x' ? 'x' : 'y'));
  }
}

TEST_CASE("y_set: nearest special vertices per class") {
  Engine b = bl1();
  int cx = cls_of(b, 'x'), cy = cls_of(b, 'y');
  CHECK(name_set(b, y_set(b, v(b, "z1"), cx)) == std::set<std::string>{"x1"});
  CHECK(name_set(b, y_set(b, v(b, "x1"), cx)) == std::set<std::string>{"x1"});
  CHECK(name_set(b, y_set(b, v(b, "z1"), cy)) == std::set<std::string>{"y1"});

  Engine b2 = bl2();
  CHECK(name_set(b2, y_set(b2, v(b2, "x1"), cls_of(b2, 'y'))) == std::set<std::string>{"z1"});
  CHECK(name_set(b2, y_set(b2, v(b2, "y1"), cls_of(b2, 'x'))) == std::set<std::string>{"x2"});
}

TEST_CASE("geo1_window: published sets") {
  Engine b = bl1();
  auto g1 = geo1_window(b, v(b, "x1"));
  CHECK(g1.cert == Cert::Exact);
  // B(x1,6) reaches x7 on the rail (dist n-1) and y5 across a rung (dist n+1)
  std::set<std::string> want;
  for (int n = 1; n <= 7; ++n) {
    want.insert("x" + std::to_string(n));
    if (n <= 5) want.insert("y" + std::to_string(n));
  }
  CHECK(name_set(b, g1.elems) == want);

  // z-based bundle: the computed value omits the base (it is not special)
  auto g1z = geo1_window(b, v(b, "z1"));
  CHECK(name_set(b, g1z.elems).count("z1") == 0);

  Engine f = make(FamilyKind::FreeGroup, "e||ab", {20, 4, -1});
  CHECK(name_set(f, geo1_window(f, v(f, "e")).elems) ==
        std::set<std::string>{"e", "a", "ab", "aba", "abab"});
}

TEST_CASE("geo1 is inside geo and consists of special vertices") {
  for (FamilyKind k : {FamilyKind::BadLadderI, FamilyKind::BadLadderII}) {
    Engine e = make(k, "@eta", {32, 6, -1});
    for (const char* base : {"x1", "y1"}) {
      auto g1 = geo1_window(e, v(e, base));
      const auto& geo = e.geo_union(v(e, base)).first;
      for (VertexId u : g1.elems) {
        CHECK(geo.full_set.count(u) == 1);
        CHECK(is_special(e, u).pass);
      }
    }
  }
}

TEST_CASE("tail absorption: each prefix escapes geo1 in at most one vertex") {
  Engine b = bl2();
  VertexId x1 = v(b, "x1");
  const auto& g1 = b.geo1(x1).first;
  for (const auto& p : b.prefixes(x1, 10)) {
    int outside = 0;
    for (VertexId u : p.verts)
      if (!g1.full_set.count(u)) ++outside;
    CHECK(outside <= 1);  // a ray leaves the corrected bundle finitely often
  }
}

TEST_CASE("symdiff_report: corrected bundles have bounded difference") {
  Engine b = bl2();
  auto geo = symdiff_report(b, v(b, "x1"), v(b, "y1"), false, {2, 4, 6});
  CHECK(geo.verdict == "UNBOUNDED-TREND");
  long prev = -1;
  for (const auto& row : geo.profile) {
    CHECK(row.max_depth > prev);
    prev = row.max_depth;
  }

  auto g1 = symdiff_report(b, v(b, "x1"), v(b, "y1"), true, {2, 4, 6});
  CHECK(g1.verdict == "BOUNDED");
  CHECK(g1.profile.back().max_depth == 3);
  CHECK(name_set(b, g1.delta_elems) == std::set<std::string>{"x1", "y1", "z1", "z2"});

  Engine f = make(FamilyKind::FreeGroup, "e||ab", {20, 4, -1});
  auto fd = symdiff_report(f, v(f, "e"), v(f, "ab"), true, {4});
  CHECK(fd.verdict == "BOUNDED");
  CHECK(name_set(f, fd.delta_elems) == std::set<std::string>{"e", "a"});
}

TEST_CASE("class count bound holds") {
  for (FamilyKind k : {FamilyKind::BadLadderI, FamilyKind::BadLadderII}) {
    Engine e = make(k, "@eta", {32, 6, -1});
    CHECK((int)e.xi().size() <= e.class_count_bound());
  }
  Engine f = make(FamilyKind::FreeGroup, "e||ab", {20, 4, -1});
  CHECK((int)f.xi().size() <= f.class_count_bound());
  CHECK(f.class_count_bound() == 1);
}

TEST_CASE("calibration suite passes for the built-in families") {
  for (FamilyKind k : {FamilyKind::BadLadderI, FamilyKind::BadLadderII}) {
    Engine e = make(k, "@eta", {32, 6, -1});
    auto rep = run_calibration(e);
    CHECK_MESSAGE(rep.pass, rep.first_failure);
  }
  Engine z = make(FamilyKind::ZLadder, "@eta+", {20, 5, -1});
  CHECK(run_calibration(z).pass);
  Engine f = make(FamilyKind::FreeGroup, "e||ab", {20, 4, -1});
  CHECK(run_calibration(f).pass);
}
