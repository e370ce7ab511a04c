#include "modelforge/kg/store.hpp"
#include "modelforge/kg/vocab.hpp"

#include "kg_oracle.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

namespace kg = modelforge::kg;
namespace vocab = modelforge::kg::vocab;
using kg::Iri;
using kg::Literal;
using kg::Term;
using kg::Triple;

namespace {

const Iri kCode{"graph", "code"};

Triple typed(const std::string& local, const Iri& cls) { return {Iri("mf", local), vocab::rdf::type, cls}; }

std::filesystem::path temp_file(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "modelforge_kg_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Store, InsertIntoEmptyGraphCountsOne) {
  kg::Store store;
  store.create_graph(kCode);
  EXPECT_EQ(store.insert(kCode, {typed("m1", vocab::cem::Method)}), 1u);
  EXPECT_EQ(store.insert(kCode, {typed("m1", vocab::cem::Method)}), 0u);
}

TEST(Store, InsertCountsOnlyNewTriples) {
  kg::Store store;
  store.create_graph(kCode);
  std::vector<Triple> first = {typed("a", vocab::cem::Method), typed("b", vocab::cem::Method)};
  std::vector<Triple> second = {typed("a", vocab::cem::Method), typed("b", vocab::cem::Method),
                                typed("c", vocab::cem::Method), typed("d", vocab::cem::Class),
                                typed("e", vocab::cem::CodeVariable)};
  store.insert(kCode, first);
  // set-difference oracle
  std::set<Triple> already(first.begin(), first.end());
  std::size_t expected = 0;
  for (const auto& t : second) expected += already.count(t) ? 0 : 1;
  ASSERT_EQ(expected, 3u);
  EXPECT_EQ(store.insert(kCode, second), expected);
}

TEST(Store, RejectsUnknownPrefixAndGraph) {
  kg::Store store;
  store.create_graph(kCode);
  Triple bad{Iri("nope", "x"), vocab::rdf::type, vocab::cem::Method};
  try {
    store.insert(kCode, {bad});
    FAIL() << "expected UnknownPrefix";
  } catch (const kg::KgError& e) {
    EXPECT_EQ(e.code(), kg::KgError::Code::UnknownPrefix);
  }
  EXPECT_EQ(store.size(kCode), 0u);  // nothing partially inserted
  try {
    store.insert(Iri("graph", "missing"), {typed("m", vocab::cem::Method)});
    FAIL() << "expected UnknownGraph";
  } catch (const kg::KgError& e) {
    EXPECT_EQ(e.code(), kg::KgError::Code::UnknownGraph);
  }
}

TEST(Store, RemovalOfAbsentTripleIsNoop) {
  kg::Store store;
  store.create_graph(kCode);
  std::vector<Triple> ts = {typed("m", vocab::cem::Method)};
  EXPECT_EQ(store.remove(kCode, ts), 0u);
  store.insert(kCode, ts);
  EXPECT_EQ(store.remove(kCode, ts), 1u);
  EXPECT_EQ(store.size(kCode), 0u);
}

TEST(Literal, ValidatesLexicalForm) {
  EXPECT_NO_THROW(Literal("3", kg::Datatype::Integer));
  EXPECT_THROW(Literal("3.5", kg::Datatype::Integer), kg::KgError);
  EXPECT_THROW(Literal("inf", kg::Datatype::Float), kg::KgError);
  EXPECT_THROW(Literal("yes", kg::Datatype::Boolean), kg::KgError);
  EXPECT_THROW(Iri("mf", "has space"), kg::KgError);
}

TEST(Query, TypeScanReturnsEveryInstance) {
  kg::Store store;
  store.create_graph(kCode);
  store.insert(kCode, {typed("m1", vocab::cem::Method), typed("m2", vocab::cem::Method),
                       typed("m3", vocab::cem::Method), typed("c", vocab::cem::Class)});
  kg::PatternQuery q;
  q.patterns.push_back({kg::Variable{"m"}, vocab::rdf::type, vocab::cem::Method});
  auto r = store.query(q, {kCode});
  ASSERT_EQ(r.size(), 3u);
  EXPECT_EQ(r.at(0, "m"), Term{Iri("mf", "m1")});  // lexicographic row order
}

TEST(Query, EmptyGraphGivesNoRows) {
  kg::Store store;
  store.create_graph(kCode);
  kg::PatternQuery q;
  q.patterns.push_back({kg::Variable{"m"}, vocab::rdf::type, vocab::cem::Method});
  EXPECT_TRUE(store.query(q, {kCode}).empty());
}

TEST(Query, TwoPatternJoinMatchesNestedLoop) {
  std::vector<Triple> ts = {
      typed("a", vocab::cem::Method),         typed("b", vocab::cem::Method),
      typed("x", vocab::cem::MethodCall),     {Iri("mf", "a"), vocab::cem::calls, Term{Iri("mf", "b")}},
      {Iri("mf", "a"), vocab::cem::calls, Term{Iri("mf", "x")}},
      {Iri("mf", "b"), vocab::cem::calls, Term{Iri("mf", "a")}},
  };
  kg::Graph g;
  for (const auto& t : ts) g.insert(t);
  kg::PatternQuery q;
  q.patterns.push_back({kg::Variable{"m"}, vocab::cem::calls, kg::Variable{"n"}});
  q.patterns.push_back({kg::Variable{"n"}, vocab::rdf::type, vocab::cem::Method});
  const kg::Graph* gs[] = {&g};
  auto r = kg::evaluate(q, gs);
  EXPECT_EQ(r.rows, modelforge::testing::nested_loop_join(q, ts));
  EXPECT_EQ(r.size(), 2u);
}

TEST(Query, FilterOnUnboundVariableIsMalformed) {
  kg::PatternQuery q;
  q.patterns.push_back({kg::Variable{"m"}, vocab::rdf::type, vocab::cem::Method});
  q.filters.push_back({"zz", kg::FilterOp::Eq, Term{Literal::integer(1)}});
  kg::Graph g;
  const kg::Graph* gs[] = {&g};
  try {
    kg::evaluate(q, gs);
    FAIL();
  } catch (const kg::KgError& e) {
    EXPECT_EQ(e.code(), kg::KgError::Code::MalformedQuery);
  }
}

TEST(Query, NumericFiltersCompareByValue) {
  kg::Graph g;
  for (int i = 0; i < 5; ++i) g.insert({Iri("mf", "s" + std::to_string(i)), vocab::cem::beginsAt, Literal::integer(i * 5)});
  kg::PatternQuery q;
  q.patterns.push_back({kg::Variable{"s"}, vocab::cem::beginsAt, kg::Variable{"line"}});
  q.filters.push_back({"line", kg::FilterOp::Le, Term{Literal::floating(10.0)}});
  q.filters.push_back({"line", kg::FilterOp::Ne, Term{Literal::integer(5)}});
  const kg::Graph* gs[] = {&g};
  EXPECT_EQ(kg::evaluate(q, gs).size(), 2u);  // 0 and 10
}

TEST(Query, PatternTermParsing) {
  EXPECT_EQ(kg::parse_pattern_term("?x"), kg::PatternTerm{kg::Variable{"x"}});
  EXPECT_EQ(kg::parse_pattern_term("cem:Method"), kg::PatternTerm{vocab::cem::Method});
  EXPECT_EQ(kg::parse_pattern_term("\"3\"^^xsd:integer"), kg::PatternTerm{Literal::integer(3)});
  EXPECT_THROW(kg::parse_pattern_term("\"3"), kg::KgError);
}

TEST(QueryProperty, AgreesWithNestedLoopOracle) {
  modelforge::testing::RandomKg gen(20240611);
  for (int round = 0; round < 150; ++round) {
    auto ts = gen.graph(60);
    auto q = gen.query();
    kg::Graph g;
    for (const auto& t : ts) g.insert(t);
    const kg::Graph* gs[] = {&g};
    ASSERT_EQ(kg::evaluate(q, gs).rows, modelforge::testing::nested_loop_join(q, ts)) << "round " << round;
  }
}

TEST(QueryProperty, InsertionIsMonotoneForFilterFreeQueries) {
  modelforge::testing::RandomKg gen(77);
  for (int round = 0; round < 60; ++round) {
    auto ts = gen.graph(40);
    auto extra = gen.graph(20);
    auto q = gen.query();
    q.filters.clear();
    kg::Graph g;
    for (const auto& t : ts) g.insert(t);
    const kg::Graph* gs[] = {&g};
    auto before = kg::evaluate(q, gs).rows;
    for (const auto& t : extra) g.insert(t);
    auto after = kg::evaluate(q, gs).rows;
    for (const auto& row : before) EXPECT_TRUE(std::binary_search(after.begin(), after.end(), row));
  }
}

TEST(Persistence, RoundTripsHundredTriples) {
  kg::Store store;
  store.create_graph(kCode);
  std::vector<Triple> ts;
  for (int i = 0; i < 100; ++i) {
    Iri s("mf", "s" + std::to_string(i));
    switch (i % 4) {
      case 0: ts.push_back({s, vocab::rdf::type, vocab::cem::Method}); break;
      case 1: ts.push_back({s, vocab::cem::beginsAt, Literal::integer(i)}); break;
      case 2: ts.push_back({s, vocab::cem::serialization, Literal::string("x = \"q\"\\n;\n\ty\t" + std::to_string(i))}); break;
      default: ts.push_back({s, vocab::sci::value, Literal::floating(i * 0.1)}); break;
    }
  }
  ASSERT_EQ(store.insert(kCode, ts), 100u);
  auto path = temp_file("roundtrip.nt");
  store.save(kCode, path);
  kg::Store other;
  Iri id = other.load(path);
  EXPECT_EQ(id, kCode);
  EXPECT_EQ(other.snapshot(kCode), store.snapshot(kCode));
}

TEST(Persistence, EmptyGraphWritesOnlyHeader) {
  kg::Graph g;
  std::ostringstream out;
  write_graph(out, kCode, g, kg::PrefixTable{});
  std::istringstream in(out.str());
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) {
    ++lines;
    EXPECT_TRUE(line.rfind("@prefix ", 0) == 0 || line.rfind("# graph <", 0) == 0) << line;
  }
  EXPECT_GT(lines, 1);
}

TEST(Persistence, UnterminatedLineNamesTheLine) {
  std::string text =
      "@prefix mf: <http://modelforge.dev/ns/data#> .\n"
      "<http://modelforge.dev/ns/data#a> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> "
      "<http://modelforge.dev/ns/cem#Method> .\n"
      "<http://modelforge.dev/ns/data#b> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> "
      "<http://modelforge.dev/ns/cem#Method>\n";
  std::istringstream in(text);
  kg::PrefixTable px;
  try {
    kg::read_graph(in, px);
    FAIL() << "expected ParseError";
  } catch (const kg::KgError& e) {
    EXPECT_EQ(e.code(), kg::KgError::Code::ParseError);
    EXPECT_EQ(e.line(), 3);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(Persistence, MissingFileIsIoFailure) {
  kg::Store store;
  try {
    store.load("/nonexistent/dir/graph.nt");
    FAIL();
  } catch (const kg::KgError& e) {
    EXPECT_EQ(e.code(), kg::KgError::Code::IoFailure);
  }
}

TEST(PersistenceProperty, RandomGraphsRoundTrip) {
  modelforge::testing::RandomKg gen(5);
  for (int round = 0; round < 30; ++round) {
    kg::Graph g;
    for (const auto& t : gen.graph(80)) g.insert(t);
    std::ostringstream out;
    kg::write_graph(out, kCode, g, kg::PrefixTable{});
    std::istringstream in(out.str());
    kg::PrefixTable px;
    EXPECT_EQ(kg::read_graph(in, px).graph, g);
  }
}

TEST(Vocabulary, NamedConceptsResolve) {
  const auto& cem = vocab::code_extraction_model();
  for (const char* c : {"CodeBlock", "Class", "Method", "ConditionalBlock", "LoopBlock", "MethodCall", "CodeVariable",
                        "arguments", "returnTypes", "calls", "isCalled", "beginsAt", "endsAt", "serialization",
                        "containedIn"})
    EXPECT_TRUE(cem.resolves(Iri("cem", c))) << c;
  const auto& sci = vocab::scientific_model();
  for (const char* c : {"ScientificConcept", "UnittedQuantity", "value", "unit", "Equation", "ExternalEquation",
                        "arguments", "returnTypes", "DataDescriptor", "name", "datatype", "augmentedType"})
    EXPECT_TRUE(sci.resolves(Iri("sci", c))) << c;

  kg::Graph g;
  for (const auto& t : cem.triples()) g.insert(t);
  EXPECT_TRUE(g.contains({vocab::cem::Method, vocab::rdfs::subClassOf, vocab::cem::CodeBlock}));
  kg::Graph s;
  for (const auto& t : sci.triples()) s.insert(t);
  EXPECT_TRUE(s.contains({vocab::sci::UnittedQuantity, vocab::rdfs::subClassOf, vocab::sci::ScientificConcept}));
  EXPECT_TRUE(s.contains({vocab::sci::ExternalEquation, vocab::rdfs::subClassOf, vocab::sci::Equation}));
}

TEST(Store, ConcurrentReadersSeeConsistentSnapshots) {
  kg::Store store;
  store.create_graph(kCode);
  std::atomic<bool> stop{false};
  std::thread writer([&] {
    for (int i = 0; i < 300; ++i) {
      // pairs are inserted atomically, so readers never observe half a pair
      std::vector<Triple> pair = {typed("p" + std::to_string(i), vocab::cem::Method),
                                  {Iri("mf", "p" + std::to_string(i)), vocab::cem::beginsAt, Literal::integer(i)}};
      store.insert(kCode, pair);
    }
    stop = true;
  });
  while (!stop) {
    kg::PatternQuery q;
    q.patterns.push_back({kg::Variable{"m"}, vocab::rdf::type, vocab::cem::Method});
    auto methods = store.query(q, {kCode}).size();
    EXPECT_EQ(store.snapshot(kCode).size() % 2, 0u);
    (void)methods;
  }
  writer.join();
  EXPECT_EQ(store.size(kCode), 600u);
}
