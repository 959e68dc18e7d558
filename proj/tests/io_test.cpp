#include <gtest/gtest.h>

#include "hobo/io.hpp"

using namespace hobo;

TEST(FormatNumber, Forms) {
  EXPECT_EQ(format_number(1.0), "1.0");
  EXPECT_EQ(format_number(-1.0), "-1.0");
  EXPECT_EQ(format_number(0.0), "0.0");
  EXPECT_EQ(format_number(0.5), "0.5");
  EXPECT_EQ(format_number(0.01), "0.01");
  EXPECT_EQ(format_number(16777217.0), "16777217.0");
}

TEST(Bitstring, RoundTrip) {
  const Bits b{1, 0, 0, 1, 1};
  EXPECT_EQ(bitstring(b), "10011");
  EXPECT_EQ(parse_bitstring("10011"), b);
  EXPECT_THROW(parse_bitstring("10x"), Error);
}

TEST(PolynomialJson, RoundTrip) {
  const Polynomial p = Polynomial::from_terms({{{}, 3}, {{0, 2}, -1.5}, {{1}, 4}});
  const Json j = to_json(p);
  EXPECT_TRUE(j.at("offset_included").get<bool>());
  EXPECT_EQ(polynomial_from_json(j), p);
  Json bad = j;
  bad["terms"][0]["vars"] = {2, 0};
  EXPECT_THROW(polynomial_from_json(bad), Error);
}

TEST(ModelJson, RoundTripKeepsFingerprint) {
  for (const auto& problem : {build_hobo(4), build_qubo(3)}) {
    const CompiledModel& m = problem.compiled;
    const CompiledModel back = model_from_json(Json::parse(to_json(m).dump()));
    EXPECT_EQ(back.fingerprint(), m.fingerprint());
    EXPECT_EQ(back.var_labels(), m.var_labels());
    EXPECT_EQ(back.offset(), m.offset());
    ASSERT_EQ(back.encodings().size(), 3U);
    EXPECT_EQ(back.encodings()[1].value_poly, m.encodings()[1].value_poly);
  }
}

TEST(ModelJson, RejectsInconsistentInput) {
  Json j = to_json(build_hobo(2).compiled);
  Json wrong_degree = j;
  wrong_degree["degree"] = 3;
  EXPECT_THROW(model_from_json(wrong_degree), Error);
  Json wrong_nvars = j;
  wrong_nvars["nvars"] = 5;
  EXPECT_THROW(model_from_json(wrong_nvars), Error);
  Json out_of_range = j;
  out_of_range["terms"].push_back({{"vars", {0, 99}}, {"coeff", 1.0}});
  EXPECT_THROW(model_from_json(out_of_range), Error);
  Json constant = j;
  constant["terms"].push_back({{"vars", Json::array()}, {"coeff", 1.0}});
  EXPECT_THROW(model_from_json(constant), Error);
}

TEST(Samples, CsvAndJson) {
  const PythagoreanProblem p = build_hobo(3);
  Bits good(9, 0), bad(9, 0);
  encode(p.vars[0], 3, good);
  encode(p.vars[1], 4, good);
  encode(p.vars[2], 5, good);
  SampleSet s;
  s.model_ref = p.compiled.fingerprint();
  s.entries = {{good, energy(p.compiled, good), 3}, {bad, energy(p.compiled, bad), 1}};
  s.shots = 4;
  const std::string csv = samples_to_csv(s, p.compiled);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "assignment,energy,occurrence,x,y,z");
  EXPECT_NE(csv.find(bitstring(good) + ",-1.0,3,3,4,5\n"), std::string::npos);
  EXPECT_NE(csv.find("000000000,0.0,1,1,1,1\n"), std::string::npos);

  const Json j = to_json(s, p.compiled);
  EXPECT_EQ(j["entries"][0]["decoded"]["z"], 5);
  const SampleSet back = samples_from_json(j);
  EXPECT_EQ(back.model_ref, s.model_ref);
  EXPECT_EQ(back.shots, 4U);
  ASSERT_EQ(back.entries.size(), 2U);
  EXPECT_EQ(back.entries[0].assignment, good);
  EXPECT_EQ(back.entries[1].occurrence, 1U);
}

TEST(Samples, OneHotViolationLeavesColumnEmpty) {
  const PythagoreanProblem p = build_qubo(2);
  SampleSet s;
  const Bits zero(p.compiled.nvars(), 0);
  s.entries = {{zero, energy(p.compiled, zero), 1}};
  s.shots = 1;
  const std::string csv = samples_to_csv(s, p.compiled);
  EXPECT_NE(csv.find(",1,,,\n"), std::string::npos);
  EXPECT_TRUE(to_json(s, p.compiled)["entries"][0]["decoded"]["x2"].is_null());
}

TEST(Reports, Csv) {
  ExperimentReport r;
  r.power = 4;
  r.shots = 10;
  r.theoretical = {{3, 4, 5}, {5, 12, 13}};
  r.found_primitive = {{3, 4, 5}};
  r.discovery_rate = 0.5;
  r.occurrences = {{{3, 4, 5}, 6}, {{6, 8, 10}, 2}};
  EXPECT_EQ(reports_csv({r}), "power,model,shots,theoretical_count,found_count,discovery_rate\n4,hobo,10,2,1,0.5\n");
  EXPECT_EQ(triples_csv(r), "x,y,z,primitive,occurrences\n3,4,5,1,6\n5,12,13,1,0\n6,8,10,0,2\n");
}

TEST(EnergyDump, Csv) {
  const CompiledModel m = compile(Polynomial::from_terms({{{0, 1}, 2}}), std::vector<std::string>{"a", "b"});
  const std::vector<Bits> rows{{1, 1}, {0, 1}};
  const std::vector<double> e{2.0, 0.0};
  EXPECT_EQ(energy_dump_csv(m, rows, e), "a,b,energy\n1,1,2.0\n0,1,0.0\n");
}
