#include <catch_amalgamated.hpp>

#include "geoinv/io.hpp"

using namespace geoinv;
using R = Rational;

TEST_CASE("rational literals")
{
  CHECK(parse_rational("3/4") == R(3, 4));
  CHECK(parse_rational("-6/8") == R(-3, 4));
  CHECK(parse_rational("0.125") == R(1, 8));
  CHECK(parse_rational("-2.5e-1") == R(-1, 4));
  CHECK(parse_rational("7") == R(7));
  CHECK_THROWS_AS(parse_rational("1/0"), Error);
  CHECK_THROWS_AS(parse_rational("abc"), Error);
  CHECK(to_string(R(-3, 4)) == "-3/4");
}

TEST_CASE("instances survive a JSON round trip")
{
  for (const Flags& fl : {Flags{1, 1, 1}, Flags{0, 1, 1}, Flags{1, 0, 0}}) {
    const auto inst = generate<R>(3, 6, fl);
    const auto text = io::dump_instance(inst);
    const auto back = io::instance_from_json<R>(io::parse_json(text, "test"));
    CHECK(io::dump_instance(back) == text);
    CHECK(back.L == inst.L);
    CHECK(back.flags == inst.flags);
    const auto a = io::report_json(check_instance(inst)).dump();
    const auto b = io::report_json(check_instance(back)).dump();
    CHECK(a == b);
  }
  const auto agm = generate_agm3<R>(4, 7, 1);
  const auto back = io::instance_from_json<R>(io::parse_json(io::dump_instance(agm), "test"));
  REQUIRE(back.agm);
  CHECK(agm_constraint_residual(back) == R(0));
  CHECK(back.agm->mu == agm.agm->mu);
}

TEST_CASE("float instances keep every bit")
{
  const auto inst = generate<double>(4, 2, Flags{1, 1, 1});
  const auto back = io::instance_from_json<double>(io::parse_json(io::dump_instance(inst), "test"));
  CHECK(back.L == inst.L);
  CHECK(back.phi_bar == inst.phi_bar);
}

TEST_CASE("serialization is deterministic")
{
  CHECK(io::dump_instance(generate<R>(4, 9, Flags{1, 1, 1})) == io::dump_instance(generate<R>(4, 9, Flags{1, 1, 1})));
  CHECK(io::dump_instance(generate_agm3<R>(3, 9, 2)) == io::dump_instance(generate_agm3<R>(3, 9, 2)));
}

TEST_CASE("malformed files are rejected")
{
  const auto good = io::instance_json(generate<R>(3, 1, Flags{1, 1, 1}));
  auto j = good;
  j.erase("dimension");
  CHECK_THROWS_AS(io::instance_from_json<R>(j), FormatError);
  j = good;
  j["fields"]["L"]["value"].erase(0);
  CHECK_THROWS_AS(io::instance_from_json<R>(j), FormatError);
  j = good;
  j["fields"]["u"]["valence"] = {1, 0};
  CHECK_THROWS_AS(io::instance_from_json<R>(j), FormatError);
  j = good;
  j["fields"]["phi"]["value"][1] = "99/1";
  CHECK_THROWS_AS(io::instance_from_json<R>(j), InstanceError);
  j = good;
  j["fields"]["f"]["value"][0] = "x";
  CHECK_THROWS_AS(io::instance_from_json<R>(j), FormatError);
  j = good;
  j["mode"] = "float";
  CHECK_THROWS_AS(io::instance_from_json<R>(j), FormatError);
  j = good;
  j["mapping"] = "projective";
  CHECK_THROWS_AS(io::instance_from_json<R>(j), FormatError);
  CHECK_THROWS_AS(io::parse_json("{", "x"), FormatError);
}
