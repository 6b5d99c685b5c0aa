#include <catch2/catch_amalgamated.hpp>

#include <fstream>

#include "kirchlip/json_io.hpp"
#include "oracle.hpp"

using namespace kirchlip;
using jsonio::json;
using sets::SetExpression;

namespace {

Int big() { return pow_int(2, 100); }

std::vector<SetExpression> residue_cover_15() {
  return {SetExpression::progression(1, 3), SetExpression::progression(2, 3),
          SetExpression::progression(1, 5), SetExpression::progression(2, 5),
          SetExpression::progression(3, 5), SetExpression::progression(4, 5)};
}

}  // namespace

TEST_CASE("integers ride as numbers until they outgrow them") {
  json small = jsonio::int_to_json(Int(-42));
  REQUIRE(small.is_number_integer());
  REQUIRE(jsonio::int_from_json(small) == -42);

  json wide = jsonio::int_to_json(big());
  REQUIRE(wide.is_string());
  REQUIRE(jsonio::int_from_json(wide) == big());
  REQUIRE(jsonio::int_from_json(jsonio::int_to_json(-big())) == -big());

  REQUIRE(jsonio::int_from_json(json("17")) == 17);
  REQUIRE(jsonio::int_from_json(json(17)) == 17);

  REQUIRE_THROWS_AS(jsonio::int_from_json(json("")), InputError);
  REQUIRE_THROWS_AS(jsonio::int_from_json(json("abc")), InputError);
  REQUIRE_THROWS_AS(jsonio::int_from_json(json(true)), InputError);
  REQUIRE_THROWS_AS(jsonio::int_from_json(json(1.5)), InputError);
}

TEST_CASE("rationals use slash strings with an integer fallthrough") {
  REQUIRE(jsonio::rat_to_json(Rat(5)) == json(5));
  REQUIRE(jsonio::rat_to_json(Rat(-7, 3)) == json("-7/3"));
  REQUIRE(jsonio::rat_from_json(json("-7/3")) == Rat(-7, 3));
  REQUIRE(jsonio::rat_from_json(json("2/4")) == Rat(1, 2));
  REQUIRE(jsonio::rat_from_json(json(9)) == Rat(9));
  REQUIRE(jsonio::rat_from_json(json("9")) == Rat(9));
  Rat huge(big(), Int(3));
  REQUIRE(jsonio::rat_from_json(jsonio::rat_to_json(huge)) == huge);
  REQUIRE_THROWS_AS(jsonio::rat_from_json(json("x/y")), InputError);
  REQUIRE_THROWS_AS(jsonio::rat_from_json(json(json::array())), InputError);
}

TEST_CASE("set expressions round trip by kind") {
  auto check = [](const SetExpression& s) {
    auto back = jsonio::set_from_json(jsonio::set_to_json(s));
    REQUIRE(back.kind == s.kind);
    REQUIRE(sets::set_equal(back, s));
  };
  check(SetExpression::progression(3, 10));
  check(SetExpression::almost(sets::Progression(1, 2), {Int(3), Int(7)}));
  check(SetExpression::finite({Int(2), Int(5), Int(11)}));
  check(SetExpression::union_of({SetExpression::progression(1, 3),
                                 SetExpression::progression(2, 3)}));

  json empty = jsonio::set_to_json(SetExpression::finite({}));
  REQUIRE(empty == json({{"kind", "empty"}}));
  auto back = jsonio::set_from_json(empty);
  REQUIRE(back.kind == SetExpression::Kind::finite);
  REQUIRE(back.points.empty());

  json prog = jsonio::set_to_json(SetExpression::progression(1, 2));
  REQUIRE(prog.dump() == "{\"kind\":\"progression\",\"a\":1,\"d\":2}");

  REQUIRE_THROWS_AS(jsonio::set_from_json(json({{"kind", "orchard"}})),
                    InputError);
  REQUIRE_THROWS_AS(jsonio::set_from_json(json::parse(
                        R"({"kind":"almost","base":{"kind":"finite","points":[1]},"excluded":[]})")),
                    InputError);
  REQUIRE_THROWS_AS(jsonio::set_from_json(json(3)), InputError);
}

TEST_CASE("functions round trip and accept alternative reprs") {
  SECTION("tables keep their values and window") {
    std::map<Int, Int> vals{{Int(1), Int(4)}, {Int(7), big()}, {Int(13), Int(0)}};
    lip::WindowFunction f(SetExpression::progression(1, 6), Int(13), vals);
    auto back = jsonio::function_from_json(jsonio::function_to_json(f));
    REQUIRE(back.window == f.window);
    REQUIRE(sets::set_equal(back.domain, f.domain));
    for (const Int& x : f.points()) REQUIRE(back.at(x) == f.at(x));
  }

  SECTION("window comes from the field, the override, or the last row") {
    json j = json::parse(
        R"({"domain":{"kind":"progression","a":1,"d":3},"values":[[1,5],[4,6],[7,7]]})");
    auto inferred = jsonio::function_from_json(j);
    REQUIRE(inferred.window == 7);
    auto overridden = jsonio::function_from_json(j, Int(9));
    REQUIRE(overridden.window == 9);
    REQUIRE(overridden.has(7));
    j["window"] = 7;
    REQUIRE(jsonio::function_from_json(j).window == 7);
  }

  SECTION("product-sum repr evaluates against the increasing enumeration") {
    json j = json::parse(
        R"({"domain":{"kind":"progression","a":1,"d":3},"repr":"product-sum",
            "enumeration":"increasing","coeffs":[3,-1,2],"window":16})");
    auto f = jsonio::function_from_json(j);
    lip::ProductSum ps;
    ps.enumeration = sets::enumerate_window(SetExpression::progression(1, 3),
                                            Int(16));
    ps.coeffs = {Rat(3), Rat(-1), Rat(2)};
    for (const Int& x : ps.enumeration)
      REQUIRE(Rat(f.at(x)) == lip::product_sum_eval(ps, x));

    json no_window = j;
    no_window.erase("window");
    REQUIRE_THROWS_AS(jsonio::function_from_json(no_window), InputError);
    json bad_enum = j;
    bad_enum["enumeration"] = "decreasing";
    REQUIRE_THROWS_AS(jsonio::function_from_json(bad_enum), InputError);
    json too_many = j;
    too_many["window"] = 4;
    REQUIRE_THROWS_AS(jsonio::function_from_json(too_many), InputError);
  }

  SECTION("poly repr matches direct evaluation") {
    json j = json::parse(
        R"({"domain":{"kind":"progression","a":1,"d":2},"repr":"poly",
            "coeffs":[-4,5,-1],"window":9})");
    auto f = jsonio::function_from_json(j);
    IntPoly p(std::vector<Int>{Int(-4), Int(5), Int(-1)});
    for (const Int& x : f.points()) REQUIRE(f.at(x) == p.eval(x));
  }

  SECTION("malformed functions are rejected") {
    REQUIRE_THROWS_AS(jsonio::function_from_json(json(3)), InputError);
    REQUIRE_THROWS_AS(jsonio::function_from_json(json::parse(
                          R"({"domain":{"kind":"progression","a":1,"d":2},
                              "repr":"spline","window":5})")),
                      InputError);
    REQUIRE_THROWS_AS(jsonio::function_from_json(json::parse(
                          R"({"domain":{"kind":"progression","a":1,"d":2},
                              "values":[[1,2,3]]})")),
                      InputError);
    REQUIRE_THROWS_AS(jsonio::function_from_json(json::parse(
                          R"({"values":[[1,2]]})")),
                      InputError);
  }
}

TEST_CASE("cover documents round trip") {
  auto pieces = residue_cover_15();
  json j = jsonio::cover_to_json(pieces, Int(30));
  auto doc = jsonio::cover_from_json(j);
  REQUIRE(doc.window == 30);
  REQUIRE(doc.pieces.size() == pieces.size());
  for (size_t i = 0; i < pieces.size(); ++i)
    REQUIRE(sets::set_equal(doc.pieces[i], pieces[i]));

  REQUIRE_THROWS_AS(jsonio::cover_from_json(json::object()), InputError);
  REQUIRE_THROWS_AS(jsonio::cover_from_json(
                        json({{"pieces", json::array()}})),
                    InputError);
}

TEST_CASE("face keys are comma-joined increasing indices") {
  REQUIRE(jsonio::face_key({0, 2}) == "0,2");
  REQUIRE(jsonio::face_key({4}) == "4");
  REQUIRE(jsonio::face_from_key("0,2") == std::vector<int>{0, 2});
  REQUIRE(jsonio::face_from_key("3") == std::vector<int>{3});
  REQUIRE_THROWS_AS(jsonio::face_from_key("2,0"), InputError);
  REQUIRE_THROWS_AS(jsonio::face_from_key("1,1"), InputError);
  REQUIRE_THROWS_AS(jsonio::face_from_key("a,b"), InputError);
  REQUIRE_THROWS_AS(jsonio::face_from_key(""), InputError);
}

TEST_CASE("cochains round trip through their coordinates") {
  auto cx = cech::build_cech_complex({SetExpression::progression(1, 2),
                                      SetExpression::progression(1, 3)},
                                     Int(13), 2);
  std::vector<Int> v(cx.rank(1));
  for (size_t t = 0; t < v.size(); ++t) v[t] = Int(3) - Int(2) * Int(t);
  auto z = cech::coords_to_cochain(cx, 1, v);
  auto back = jsonio::cochain_from_json(jsonio::cochain_to_json(z));
  REQUIRE(back.degree == 1);
  REQUIRE(cech::cochain_coords(cx, back) == v);

  json j = jsonio::cochain_to_json(z);
  REQUIRE(j.at("components").contains("0,1"));

  json arity = json::parse(
      R"({"degree":1,"components":{"0":{"domain":{"kind":"progression","a":1,"d":2},
          "values":[[1,1]]}}})");
  REQUIRE_THROWS_AS(jsonio::cochain_from_json(arity), InputError);
  REQUIRE_THROWS_AS(jsonio::cochain_from_json(json({{"degree", -1}})),
                    InputError);
  REQUIRE_THROWS_AS(jsonio::cochain_from_json(json::object()), InputError);
}

TEST_CASE("report payloads expose the documented keys") {
  lip::Circuit c;
  c.points = {Int(2), Int(4)};
  c.leading = Rat(-1, 2);
  c.denominator = 2;
  json cj = jsonio::circuit_to_json(c);
  REQUIRE(cj.dump() ==
          "{\"points\":[2,4],\"leading\":\"-1/2\",\"denominator\":2}");

  lip::ProductSum ps;
  ps.enumeration = {Int(1), Int(3)};
  ps.coeffs = {Rat(1), Rat(1, 3)};
  json pj = jsonio::product_sum_to_json(ps);
  REQUIRE(pj.at("integral") == false);
  REQUIRE(pj.at("coeffs")[1] == "1/3");

  RatPoly rp(std::vector<Rat>{Rat(-2), Rat(5, 2)});
  json rj = jsonio::ratpoly_to_json(rp);
  REQUIRE(rj.at("repr") == "poly");
  REQUIRE(rj.at("coeffs")[1] == "5/2");

  REQUIRE(jsonio::intpoly_to_json(IntPoly(std::vector<Int>{Int(0), Int(7)})) ==
          json::parse("[0,7]"));

  auto cls = kirch::classify_cover({SetExpression::progression(1, 2),
                                    SetExpression::progression(1, 3),
                                    SetExpression::progression(1, 6)});
  json kj = jsonio::classification_to_json(cls);
  REQUIRE(kj.at("piece_count") == 3);
  REQUIRE(kj.at("star_like") == true);
  REQUIRE_FALSE(kj.contains("nest"));

  cech::CohomologyReport rep;
  rep.degree = 1;
  rep.rank = 0;
  rep.torsion = {Int(2), Int(2)};
  REQUIRE(jsonio::cohomology_to_json(rep).dump() ==
          "{\"degree\":1,\"rank\":0,\"torsion\":[2,2]}");

  cech::CoboundaryReport neg;
  neg.is_coboundary = false;
  neg.certificate = "exact";
  neg.detail = "parity = 1 mod 2";
  json nj = jsonio::coboundary_to_json(neg);
  REQUIRE(nj.at("certificate") == "exact");
  REQUIRE_FALSE(nj.contains("witness"));

  auto run = cexgen::generate_counterexample(12, Int(14));
  json sj = jsonio::pair_state_to_json(run.trace.back());
  REQUIRE(sj.at("m") == 7);
  REQUIRE(sj.at("f").is_array());
  json certj =
      jsonio::cex_certificate_to_json(cexgen::certify_counterexample(run.q));
  REQUIRE(certj.at("pieces").size() == 3);
  REQUIRE(certj.contains("circuit"));
}

TEST_CASE("the shipped catalog parses and validates") {
  std::ifstream in(std::string(KIRCHLIP_DATA_DIR) + "/obstructions.json");
  REQUIRE(in.good());
  json j = json::parse(in);
  auto catalog = jsonio::catalog_from_json(j);
  REQUIRE(catalog.size() == 1);
  REQUIRE(catalog[0].name == "parity");
  REQUIRE(catalog[0].modulus == 2);
  REQUIRE(catalog[0].terms.size() == 4);
  REQUIRE(cech::functional_matches(catalog[0], residue_cover_15()));

  auto cx = cech::build_cech_complex(residue_cover_15(), Int(30), 2);
  REQUIRE_NOTHROW(cech::validate_functional(cx, catalog[0]));

  REQUIRE_THROWS_AS(jsonio::catalog_from_json(json::object()), InputError);
}
