#include "doctest.h"

#include <set>

#include "horohyp/endgame.hpp"
#include "horohyp/horo.hpp"

using namespace horohyp;

namespace {

Engine fg2(const std::string& ray, Horizon h = {24, 4, -1}) {
  Family f = build_family({.kind = FamilyKind::FreeGroup, .rank = 2});
  return Engine(f, RefRay::parse(f, ray), h);
}

VertexId v(Engine& e, const std::string& s) { return e.family().o().vertex(s); }

}  // namespace

TEST_CASE("c_eta_window: tail types over the corrected bundle") {
  Engine e = fg2("e||a");
  auto pairs = c_eta_window(e, 1);
  CHECK(pairs.size() >= 8);
  for (const auto& [g, t] : pairs) {
    CHECK(t.str(e.family().o()) == "a");
    std::string n = e.family().o().name(g);
    CHECK((n == "e" || n.find_first_not_of('a') == std::string::npos));
  }
  auto empty_types = c_eta_window(e, 0);
  for (const auto& [g, t] : empty_types) CHECK(t.gens.empty());

  Family b = build_family({.kind = FamilyKind::BadLadderI});
  Engine eb(b, RefRay::parse(b, "@eta"), {32, 6, -1});
  CHECK_THROWS_AS(c_eta_window(eb, 1), Error);  // not a Cayley family
}

TEST_CASE("s_eta_n: lexicographically least persistent type") {
  Engine e = fg2("e||a");
  CHECK(s_eta_n(e, 3, {}).str(e.family().o()) == "aaa");
  CHECK(s_eta_n(e, 0, {}).gens.empty());

  Engine ab = fg2("e||ab");
  CHECK(s_eta_n(ab, 2, {}).str(ab.family().o()) == "ab");
  CHECK(s_eta_n(ab, 5, {}).str(ab.family().o()) == "ababa");

  // with the reversed order on S the other tail type wins
  Family f = build_family(
      {.kind = FamilyKind::FreeGroup, .rank = 2, .order_on_S = {"b", "B", "a", "A"}});
  Engine ba(f, RefRay::parse(f, "e||ab"), {24, 4, -1});
  CHECK(s_eta_n(ba, 2, {}).str(f.o()) == "ba");
}

TEST_CASE("t_g_k_h rows for periodic free-group points") {
  Engine e = fg2("e||a");
  EndgameRow r1 = t_g_k_h(e, 1, {});
  CHECK(e.family().o().name(r1.g_n) == "e");
  CHECK(r1.k_n == 0);
  CHECK(r1.T_n.elems == r1.H_n.elems);
  CHECK(r1.T_n.cert == Cert::Truncated);

  Engine ab = fg2("e||ab");
  EndgameRow r2 = t_g_k_h(ab, 2, {});
  CHECK(ab.family().o().name(r2.g_n) == "e");
  std::set<std::string> tn;
  for (VertexId g : r2.T_n.elems) tn.insert(ab.family().o().name(g));
  CHECK(tn.count("e") == 1);
  CHECK(tn.count("ab") == 1);
  CHECK(tn.count("abab") == 1);
  CHECK(tn.count("a") == 0);  // odd ray vertices carry the other tail type
  CHECK(r2.H_n.elems == r2.T_n.elems);
}

TEST_CASE("endgame_table: coherence invariants and csv shape") {
  Engine e = fg2("e||ab", {28, 4, -1});
  EndgameTable t = endgame_table(e, 8);
  REQUIRE(t.rows.size() == 9);
  for (int n = 0; n < 8; ++n) {
    const auto& a = t.rows[n].s_n.gens;
    const auto& b = t.rows[n + 1].s_n.gens;
    CHECK(std::equal(a.begin(), a.end(), b.begin()));
    CHECK(t.rows[n].k_n <= t.rows[n + 1].k_n);
    CHECK(t.rows[n].k_n == 0);
  }
  std::string csv = t.csv(e.family().o());
  CHECK(csv.rfind("n,s_n,|T_n|,g_n,k_n,|H_n|\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 10);
}

TEST_CASE("z_heuristic") {
  Engine e = fg2("e||a", {28, 4, -1});
  CHECK(z_heuristic(e, 6).verdict == "LIKELY-Z");
  Engine ab = fg2("e||ab", {28, 4, -1});
  CHECK(z_heuristic(ab, 6).verdict == "LIKELY-Z");
  CHECK(z_heuristic(ab, 0).verdict == "INCONCLUSIVE");
}

TEST_CASE("fn_class_audit: orbit pairs with zero slimness force identity witnesses") {
  Engine e = fg2("e||a", {28, 4, -1});
  for (const char* g : {"e", "a", "b", "Ba"}) {
    auto rep = fn_class_audit(e, v(e, g), 4, 0);
    CHECK_MESSAGE(rep.pass, "g = ", g);
    CHECK(rep.threshold_n <= 2);
    for (const auto& row : rep.rows) {
      CHECK(row.s_equal);
      if (row.witness_ok) CHECK(row.witness == "e");
    }
  }
  Engine ab = fg2("e||ab", {28, 4, -1});
  for (const char* g : {"a", "ab", "ba"}) {
    auto rep = fn_class_audit(ab, v(ab, g), 4, 0);
    CHECK_MESSAGE(rep.pass, "g = ", g);
  }
}

TEST_CASE("fn_class_audit on the z-ladder") {
  Family f = build_family({.kind = FamilyKind::ZLadder});
  Engine e(f, RefRay::parse(f, "@eta+"), {24, 5, -1});
  for (const char* g : {"0,1", "2,0", "-1,1"}) {
    auto rep = fn_class_audit(e, v(e, g), 3, 1);
    CHECK_MESSAGE(rep.pass, "g = ", g);
  }
}

TEST_CASE("equivariance of geo1 and s_n under translation") {
  Engine e = fg2("e||ab", {28, 4, -1});
  for (const char* g : {"a", "b", "ab", "aB"}) {
    auto rep = equivariance_check(e, v(e, g), v(e, "e"), 4);
    CHECK_MESSAGE(rep.pass, "g = ", g);
  }
  Family z = build_family({.kind = FamilyKind::ZLadder});
  Engine ez(z, RefRay::parse(z, "@eta+"), {24, 5, -1});
  auto rep = equivariance_check(ez, ez.family().o().vertex("1,1"), ez.family().o().vertex("0,0"), 3);
  CHECK(rep.pass);
}
