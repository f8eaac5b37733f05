// Parser, labeling, structural functions, and the following-successor map.
#include "doctest.h"

#include "helpers.hpp"
#include "rvwb/ast.hpp"
#include "rvwb/parser.hpp"
#include "rvwb/structure.hpp"

using namespace rvwb;
using rvwb::testing::load_fixture;
using rvwb::testing::ProgramGen;

TEST_CASE("parser assigns fresh positive labels in preorder") {
  CommandPtr c = parse_program("skip; x := 1; if true -> skip fi");
  CHECK(to_string(c) == "skip@1 ; x@2 := 1 ; if@3 true -> skip@4 fi");
}

TEST_CASE("explicit labels are kept and skipped by fresh assignment") {
  CommandPtr c = parse_program("skip@2; skip");
  CHECK(to_string(c) == "skip@2 ; skip@1");
  CHECK(ok(c));
}

TEST_CASE("duplicate labels are rejected") {
  CHECK_THROWS_AS(parse_program("skip@1; skip@1"), ParseError);
  // fresh assignment steps over explicit labels, so this is fine
  CHECK(to_string(parse_program("skip; skip@1")) == "skip@2 ; skip@1");
}

TEST_CASE("non-positive labels are rejected") {
  CHECK_THROWS_AS(parse_program("skip@0"), ParseError);
  CHECK_THROWS_AS(parse_program("x@-3 := 1"), ParseError);
}

TEST_CASE("printing round-trips through the parser") {
  for (const char* name : {"c0.gcl", "c1.gcl", "c4.gcl", "c5.gcl"}) {
    CommandPtr c = load_fixture(name);
    CHECK(equal(c, parse_program(to_string(c))));
  }
}

TEST_CASE("printing round-trips on random programs") {
  ProgramGen gen(7, {"x", "y", "z"});
  for (int i = 0; i < 50; ++i) {
    Label next = 1;
    CommandPtr c = gen.gen(3, next);
    CHECK(ok(c));
    CHECK(okf(c, next));
    CommandPtr back = parse_program(to_string(c));
    CHECK(equal(c, back));
  }
}

TEST_CASE("lab and labs of the running example") {
  CommandPtr c0 = load_fixture("c0.gcl");
  CHECK(lab(c0) == 1);
  CHECK(labs(c0) == LabelSet{1, 2, 3, 4, 5});
  CHECK(okf(c0, 6));
  CHECK_FALSE(okf(c0, 3));
}

TEST_CASE("sub finds the unique subcommand") {
  CommandPtr c0 = load_fixture("c0.gcl");
  CHECK(sub(4, c0)->kind == Command::Kind::Assign);
  CHECK(sub(3, c0)->kind == Command::Kind::If);
  CHECK_THROWS_AS(sub(9, c0), std::out_of_range);
}

TEST_CASE("following successors of c0") {
  CommandPtr c0 = load_fixture("c0.gcl");
  CHECK(fsuc(2, c0, 6) == 6); // loop exit goes to the final label
  CHECK(fsuc(4, c0, 6) == 2); // loop body routes back to the head
  CHECK(fsuc(1, c0, 6) == 2);
  CHECK(fsuc(3, c0, 6) == 2);
  CHECK(fsuc(5, c0, 6) == 2);
}

TEST_CASE("enab is the ordered disjunction of the guards") {
  CommandPtr c0 = load_fixture("c0.gcl");
  CHECK(to_string(enab(sub(3, c0)->gcs)) ==
        "x mod 2 = 0 || x mod 2 != 0");
}

TEST_CASE("ghost detection and erasure") {
  CommandPtr c = parse_program("g := g + 1; x := y");
  CHECK(ghost("g", c));
  CHECK(ghost("x", c));       // x is written but never read
  CHECK_FALSE(ghost("y", c)); // y is read in the assignment to x
  CommandPtr e = erase("g", c);
  CHECK(to_string(e) == "skip@1 ; x@2 := y");
  // erasure keeps labels, so fsuc is unchanged
  CHECK(fsuc(1, e, 3) == fsuc(1, c, 3));
}

TEST_CASE("a program using g outside self-assignment is not g-ghost") {
  CHECK_FALSE(ghost("g", parse_program("x := g")));
  CHECK_FALSE(ghost("g", parse_program("do g > 0 -> skip od")));
  CHECK(ghost("g", parse_program("g := x"))); // g may be assigned anything
  CHECK(ghost("g", parse_program("g := g * 2")));
}

TEST_CASE("well-formedness report flags a partial if") {
  DomainBound b;
  b.vars = {"x"};
  b.lo = -2;
  b.hi = 2;
  WellFormednessReport good =
      well_formed(load_fixture("c0.gcl"), b);
  CHECK(good.ok_labels);
  CHECK(good.all_pass());

  WellFormednessReport bad =
      well_formed(parse_program("if x > 0 -> skip fi"), b);
  REQUIRE(bad.ifs.size() == 1);
  CHECK(bad.ifs[0].status == TotalIfStatus::Fail);
  REQUIRE(bad.ifs[0].counterexample.has_value());
  CHECK(bad.ifs[0].counterexample->get("x") <= 0);
}
