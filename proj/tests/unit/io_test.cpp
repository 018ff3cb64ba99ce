#include <gtest/gtest.h>

#include <filesystem>

#include "corpus.hpp"
#include "oscal/error.hpp"
#include "oscal/io.hpp"

namespace oscal {
namespace {

namespace fs = std::filesystem;

std::string golden(const std::string& name) { return read_source(std::string(OSCAL_GOLDEN_DIR) + "/" + name); }

std::size_t error_line(const std::string& text) {
  try {
    parse_document(text);
  } catch (const DocumentError& e) {
    return e.line();
  }
  return 0;
}

TEST(Golden, RoundTripsAreByteExact) {
  std::size_t seen = 0;
  for (const auto& entry : fs::directory_iterator(OSCAL_GOLDEN_DIR)) {
    std::string name = entry.path().filename().string();
    if (!entry.is_regular_file() || name == "broken.json") continue;
    std::string text = read_source(entry.path().string());
    EXPECT_EQ(serialize(parse_document(text)), text) << name;
    ++seen;
  }
  EXPECT_GE(seen, 17u);
}

TEST(Golden, Kinds) {
  EXPECT_EQ(kind_name(parse_document(golden("k2.json"))), "space");
  EXPECT_EQ(kind_name(parse_document(golden("f2.json"))), "qfunction");
  EXPECT_EQ(kind_name(parse_document(golden("k1_cif.json"))), "cifunction");
  EXPECT_EQ(kind_name(parse_document(golden("k3_seq.json"))), "sequence");
  EXPECT_EQ(kind_name(parse_document(golden("se_unit.json"))), "basis");
  EXPECT_EQ(parse_qfunction(golden("f2.json")), testing::f2());
  EXPECT_THROW(parse_space(golden("f2.json")), DocumentError);
}

TEST(Golden, BrokenSpaceNamesTheLine) {
  try {
    parse_document(golden("broken.json"));
    FAIL() << "broken.json parsed";
  } catch (const DocumentError& e) {
    EXPECT_EQ(e.line(), 5u);
    EXPECT_NE(std::string(e.what()).find("lacks recurring pattern"), std::string::npos);
  }
}

TEST(Parse, Diagnostics) {
  EXPECT_EQ(error_line("{\n  \"kind\": \"space\",\n  \"root\": 0,\n  \"nodes\": [\n"), 4u);
  EXPECT_EQ(error_line("{\n  \"kind\": \"space\",\n  \"kind\": \"space\"\n}\n"), 3u);
  EXPECT_EQ(error_line("{\n  \"kind\": \"planet\"\n}\n"), 2u);
  EXPECT_EQ(error_line("{\n  \"kind\": \"space\",\n  \"root\": 0,\n  \"nodes\": [{\"id\": 0, \"prefix\": [], "
                       "\"recurring\": []}],\n  \"colour\": 1\n}\n"),
            5u);
  std::string f = golden("f1.json");
  std::string bad = f;
  bad.replace(bad.find("\"1\""), 3, "0.5");
  EXPECT_GT(error_line(bad), 0u);
}

TEST(Parse, RationalsAreCanonical) {
  std::string f = golden("f1.json");
  std::string odd = f;
  odd.replace(odd.find("\"1\""), 3, "\"2/2\"");
  EXPECT_EQ(serialize(parse_document(odd)), f);
}

TEST(RoundTrip, RandomCorpus) {
  testing::Rng rng(42);
  for (int i = 0; i < 60; ++i) {
    SpacePtr s = testing::random_space(rng);
    QFunction f = i % 3 == 0 ? testing::random_complex_function(rng, s) : testing::random_function(rng, s);
    std::string ts = serialize(Document(s));
    EXPECT_EQ(*parse_space(ts), *s);
    EXPECT_EQ(serialize(parse_document(ts)), ts);
    std::string tf = serialize(Document(f));
    EXPECT_EQ(parse_qfunction(tf), f);
    EXPECT_EQ(serialize(parse_document(tf)), tf);
  }
}

TEST(RoundTrip, Witnesses) {
  FunctionSeq g = testing::k3_sequence();
  ReductionResult r = difference_run(g, 2, 0, Rational(1, 4), {1, 2, 3, 4});
  for (const WitnessDocument& w : {WitnessDocument(r.chain.bundle), WitnessDocument(r.difference)}) {
    std::string text = serialize(Document(w));
    EXPECT_EQ(parse_witness(text), w);
    EXPECT_EQ(serialize(parse_document(text)), text);
  }
}

TEST(ReadSource, MissingFile) { EXPECT_THROW(read_source("/nonexistent/oscal.json"), InputError); }

}  // namespace
}  // namespace oscal
