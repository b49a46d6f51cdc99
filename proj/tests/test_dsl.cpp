#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "procview/dsl/parser.hpp"
#include "support/generators.hpp"

using namespace procview;
using namespace procview::dsl;

namespace {

const char* kMinimal = R"(
process Echo() {
  in x: Int;
  out y: Int;
  buf x = 0;
  ending: true;
  calc:
    y := <ft(x)>;
}
)";

const char* kThree = R"(
process P() { ending: true; calc: }
process Q() { ending: true; calc: }
process R() { ending: true; calc: }
)";

bool has_kind(const ParseResult& r, DiagKind k) {
  for (const auto& d : r.diagnostics)
    if (d.kind == k) return true;
  return false;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Lexer, TokensAndPositions) {
  const auto toks = lex("a (+) b // note\n  c := 1..3");
  ASSERT_GE(toks.size(), 8u);
  EXPECT_EQ(toks[1].text, "(+)");
  EXPECT_EQ(toks[3].text, "c");
  EXPECT_EQ(toks[3].pos.line, 2);
  EXPECT_EQ(toks[3].pos.column, 3);
  EXPECT_EQ(toks[4].text, ":=");
  EXPECT_EQ(toks[6].text, "..");
  EXPECT_EQ(toks.back().kind, Tok::End);
}

TEST(Parser, MinimalProcess) {
  const auto r = parse(kMinimal);
  ASSERT_TRUE(r.ok()) << r.diagnostics.front();
  ASSERT_EQ(r.doc.processes.size(), 1u);
  const auto& s = *r.doc.processes[0].spec;
  EXPECT_EQ(s.name, "Echo");
  EXPECT_EQ(s.inputs().size(), 1u);
  EXPECT_EQ(s.outputs().size(), 1u);
  EXPECT_TRUE(validate(s).empty());
}

TEST(Parser, CompositionPrecedence) {
  const auto r = parse(std::string(kThree) + "compose M = (P ; Q) || R\ncompose N = P ; Q || R\n");
  ASSERT_TRUE(r.ok()) << r.diagnostics.front();
  const auto& m = r.doc.composition("M")->expr;
  const auto* p = std::get_if<pexpr::Par>(&m->node);
  ASSERT_NE(p, nullptr);
  EXPECT_TRUE(std::holds_alternative<pexpr::Seq>(p->left->node));
  EXPECT_TRUE(std::holds_alternative<pexpr::Elem>(p->right->node));
  // `;` binds tighter without parentheses too.
  EXPECT_TRUE(equal(m, r.doc.composition("N")->expr));
}

TEST(Parser, ParallelAndChoiceAreLeftAssociative) {
  const auto r = parse(std::string(kThree) + "compose M = P || Q (+)[right] R\n");
  ASSERT_TRUE(r.ok());
  const auto* a = std::get_if<pexpr::Alt>(&r.doc.composition("M")->expr->node);
  ASSERT_NE(a, nullptr);
  EXPECT_TRUE(std::holds_alternative<pexpr::Par>(a->left->node));
  EXPECT_EQ(a->chooser, ChooserPolicy(FixedChoice{Branch::Right}));
}

TEST(Parser, MissingEndingClause) {
  const auto r = parse("process P() {\n  in x: Int;\n  buf x = 0;\n  calc:\n}\n");
  ASSERT_EQ(r.diagnostics.size(), 1u);
  const auto& d = r.diagnostics[0];
  EXPECT_EQ(d.kind, DiagKind::SyntaxError);
  EXPECT_NE(d.message.find("ending"), std::string::npos);
  EXPECT_EQ(d.pos.line, 4);
  EXPECT_NE(std::find(d.expected.begin(), d.expected.end(), "ending"), d.expected.end());
}

TEST(Parser, SyntaxErrorCarriesExpectedSet) {
  const auto r = parse("compose M = \n");
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].kind, DiagKind::SyntaxError);
  EXPECT_EQ(r.diagnostics[0].pos.line, 2);
  EXPECT_FALSE(r.diagnostics[0].expected.empty());
}

TEST(Parser, UnresolvedReferences) {
  EXPECT_TRUE(has_kind(parse("compose M = Ghost\n"), DiagKind::UnresolvedReference));
  EXPECT_TRUE(has_kind(parse(std::string(kThree) + "compose M = P(k=1)\n"), DiagKind::UnresolvedReference));
}

TEST(Parser, TypeErrors) {
  EXPECT_TRUE(has_kind(parse("process P() { in x: Int; buf x = true; ending: true; calc: }"), DiagKind::TypeError));
  EXPECT_TRUE(has_kind(parse("process P(d: Int = 1) { ending: true; calc: }\ncompose M = P(d=true)\n"),
                       DiagKind::TypeError));
}

TEST(Parser, DuplicateNames) {
  EXPECT_TRUE(has_kind(parse(std::string(kThree) + "process P() { ending: true; calc: }"), DiagKind::DuplicateName));
}

TEST(Parser, ChainedComparisonsAreRejected) {
  EXPECT_TRUE(has_kind(parse("process P(a: Int = 1) { ending: 1 < a < 3; calc: }"), DiagKind::SyntaxError));
}

TEST(Parser, LoopOptions) {
  const auto r = parse(std::string(kThree) + "compose A = loop(auto 3) P\ncompose B = loop(manual restart=true gap=2) (P ; Q)\n");
  ASSERT_TRUE(r.ok());
  const auto* a = std::get_if<pexpr::LoopAuto>(&r.doc.composition("A")->expr->node);
  ASSERT_NE(a, nullptr);
  EXPECT_EQ(a->delay, 3u);
  const auto* b = std::get_if<pexpr::LoopNonAuto>(&r.doc.composition("B")->expr->node);
  ASSERT_NE(b, nullptr);
  EXPECT_EQ(b->policy, (RestartPolicy{true, 2}));
  EXPECT_TRUE(has_kind(parse(std::string(kThree) + "compose A = loop(auto 0) P\n"), DiagKind::SyntaxError));
}

TEST(Parser, Environments) {
  const auto r = parse(std::string(kMinimal) + "compose M = Echo\nenv E { entry @ 0, 4..5 = <ev>; x @ 1 = <3, -4>; }\n");
  ASSERT_TRUE(r.ok()) << r.diagnostics.front();
  const Network n = compile(r.doc.composition("M")->expr);
  const EnvInputs env = to_env_inputs(*r.doc.env("E"), n, 8);
  EXPECT_EQ(event_stream(8, {0, 4, 5}), env.at("Echo.start"));
  EXPECT_EQ(env.at("x").at(1), (TimeInterval{Message(3), Message(-4)}));

  const auto bad = parse(std::string(kMinimal) + "compose M = Echo\nenv E { x @ 1 = <true>; }\n");
  ASSERT_TRUE(bad.ok());
  EXPECT_THROW(to_env_inputs(*bad.doc.env("E"), n, 8), Error);
}

TEST(Parser, SampleSpecificationIsValid) {
  const auto r = parse(read_file("specs/pipeline.pspec"));
  ASSERT_TRUE(r.ok()) << r.diagnostics.front();
  EXPECT_EQ(r.doc.processes.size(), 3u);
  EXPECT_EQ(r.doc.compositions.size(), 5u);
  EXPECT_EQ(r.doc.envs.size(), 2u);
}

TEST(Printer, RoundTripOfSample) {
  const auto r = parse(read_file("specs/pipeline.pspec"));
  ASSERT_TRUE(r.ok());
  const std::string text = print(r.doc);
  const auto again = parse(text);
  ASSERT_TRUE(again.ok()) << again.diagnostics.front();
  EXPECT_TRUE(again.doc == r.doc);
  EXPECT_EQ(print(again.doc), text);
}

TEST(Printer, ExpressionParentheses) {
  const auto r = parse(std::string(kThree) + "compose M = P ; (Q ; R)\ncompose N = P || (Q (+) R)\n");
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(print_expr(r.doc.composition("M")->expr), "P ; (Q ; R)");
  EXPECT_EQ(print_expr(r.doc.composition("N")->expr), "P || (Q (+) R)");
}

TEST(Printer, RandomDocumentsRoundTrip) {
  fixtures::Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    const auto doc = fixtures::random_document(rng);
    const std::string text = print(doc);
    const auto r = parse(text);
    ASSERT_TRUE(r.ok()) << text << "\n" << r.diagnostics.front();
    ASSERT_TRUE(r.doc == doc) << text << "\n---\n" << print(r.doc);
  }
}
