#include "oscal/io.hpp"

#include <charconv>
#include <fstream>
#include <initializer_list>
#include <iostream>
#include <sstream>

#include "json_lines.hpp"

namespace oscal {

namespace {

using detail::Json;
using detail::LocatedJson;

std::string str(std::uint64_t v) { return std::to_string(v); }

// A JSON value together with its pointer, for diagnostics.
class Node {
 public:
  Node(const Json& j, std::string ptr, const LocatedJson& doc) : j_(j), ptr_(std::move(ptr)), doc_(doc) {}

  const Json& json() const { return j_; }
  const std::string& pointer() const { return ptr_; }

  [[noreturn]] void fail(const std::string& message) const {
    throw DocumentError(doc_.line_of(ptr_), (ptr_.empty() ? std::string("document") : ptr_) + ": " + message);
  }

  // Checks for an object with exactly the required keys plus any of the optional ones.
  void object(std::initializer_list<const char*> required, std::initializer_list<const char*> optional = {}) const {
    if (!j_.is_object()) fail("expected an object");
    for (const char* k : required) {
      if (!j_.contains(k)) fail(std::string("missing field \"") + k + "\"");
    }
    for (const auto& [k, v] : j_.items()) {
      bool known = false;
      for (const char* r : required) known = known || k == r;
      for (const char* o : optional) known = known || k == o;
      if (!known) child(k).fail("unknown field");
    }
  }

  Node child(const std::string& key) const { return Node(j_.at(key), ptr_ + "/" + detail::pointer_token(key), doc_); }
  Node item(std::size_t i) const { return Node(j_.at(i), ptr_ + "/" + std::to_string(i), doc_); }

  std::size_t array() const {
    if (!j_.is_array()) fail("expected an array");
    return j_.size();
  }
  std::uint64_t natural() const {
    if (!j_.is_number_unsigned()) fail("expected a natural number");
    return j_.get<std::uint64_t>();
  }
  std::string text() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }
  Rational rational() const {
    std::string s = text();
    try {
      return parse_rational(s);
    } catch (const InputError& e) {
      fail(e.what());
    }
  }
  bool is_complex() const { return j_.is_object(); }
  Complex value() const {
    if (j_.is_string()) return Complex(rational());
    object({"re", "im"});
    return Complex(child("re").rational(), child("im").rational());
  }
  // Decimal natural number written as a string; `what` names it in messages.
  std::uint64_t natural_text(const std::string& s, const char* what) const {
    std::uint64_t v = 0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size() || s.empty() || (s.size() > 1 && s[0] == '0')) {
      fail(std::string("bad ") + what + " \"" + s + "\"");
    }
    return v;
  }

  void kind(const char* expected) const {
    std::string k = child("kind").text();
    if (k != expected) child("kind").fail(std::string("expected kind \"") + expected + "\", got \"" + k + "\"");
  }

 private:
  const Json& j_;
  std::string ptr_;
  const LocatedJson& doc_;
};

Json rational_json(const Rational& q) { return to_string(q); }

Json complex_json(const Complex& z, bool as_object) {
  if (!as_object) return to_string(z.re);
  Json o = Json::object();
  o["re"] = to_string(z.re);
  o["im"] = to_string(z.im);
  return o;
}

Json value_json(const Complex& z) { return complex_json(z, !z.is_real()); }

// ---- space

SpacePtr read_space(const Node& n) {
  n.object({"kind", "root", "nodes"});
  n.kind("space");
  Node nodes = n.child("nodes");
  std::size_t count = nodes.array();
  SpaceLayout layout;
  layout.root = static_cast<NodeId>(n.child("root").natural());
  layout.nodes.resize(count);
  std::vector<std::optional<std::size_t>> entry_of(count);
  for (std::size_t e = 0; e < count; ++e) {
    Node entry = nodes.item(e);
    entry.object({"id", "prefix", "recurring"});
    std::uint64_t id = entry.child("id").natural();
    if (id >= count) entry.child("id").fail("ids must be 0.." + str(count - 1));
    if (entry_of[id]) entry.child("id").fail("id " + str(id) + " appears twice");
    entry_of[id] = e;
    for (const char* list : {"prefix", "recurring"}) {
      Node l = entry.child(list);
      std::size_t len = l.array();
      auto& dest = std::string(list) == "prefix" ? layout.nodes[id].prefix : layout.nodes[id].recurring;
      for (std::size_t i = 0; i < len; ++i) dest.push_back(static_cast<NodeId>(l.item(i).natural()));
    }
  }
  std::vector<Violation> bad = validate(layout);
  if (!bad.empty()) {
    std::string message;
    for (const Violation& v : bad) {
      if (!message.empty()) message += "; ";
      message += (v.node ? "node " + str(*v.node) + ": " : std::string()) + v.rule;
    }
    const Violation& first = bad.front();
    if (first.node && *first.node < count && entry_of[*first.node]) {
      nodes.item(*entry_of[*first.node]).fail(message);
    }
    n.fail(message);
  }
  return make_space(std::move(layout));
}

Json space_json(const TreeSpace& s) {
  Json o = Json::object();
  o["kind"] = "space";
  o["root"] = s.root();
  Json nodes = Json::array();
  for (NodeId id = 0; id < s.size(); ++id) {
    Json e = Json::object();
    e["id"] = id;
    e["prefix"] = s.node(id).prefix;
    e["recurring"] = s.node(id).recurring;
    nodes.push_back(std::move(e));
  }
  o["nodes"] = std::move(nodes);
  return o;
}

// Object keyed by every node id exactly once.
template <typename F>
void per_node(const Node& n, std::size_t count, F&& read) {
  if (!n.json().is_object()) n.fail("expected an object keyed by node id");
  std::vector<bool> seen(count, false);
  for (const auto& [k, v] : n.json().items()) {
    Node c = n.child(k);
    std::uint64_t id = c.natural_text(k, "node id");
    if (id >= count) c.fail("unknown node " + k);
    seen[id] = true;
    read(static_cast<NodeId>(id), c);
  }
  for (std::size_t id = 0; id < count; ++id) {
    if (!seen[id]) n.fail("no entry for node " + str(id));
  }
}

// ---- functions

QFunction read_qfunction(const Node& n) {
  n.object({"kind", "space", "values"});
  n.kind("qfunction");
  SpacePtr s = read_space(n.child("space"));
  std::vector<Complex> values(s->size());
  bool complex = false;
  per_node(n.child("values"), s->size(), [&](NodeId id, const Node& c) {
    complex = complex || c.is_complex();
    values[id] = c.value();
  });
  std::vector<Rational> re(values.size()), im(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    re[i] = values[i].re;
    im[i] = values[i].im;
  }
  return complex ? QFunction(s, std::move(re), std::move(im)) : QFunction(s, std::move(re));
}

Json qfunction_json(const QFunction& f) {
  Json o = Json::object();
  o["kind"] = "qfunction";
  o["space"] = space_json(f.space());
  Json values = Json::object();
  for (NodeId id = 0; id < f.size(); ++id) values[str(id)] = complex_json(f.at(id), !f.is_real());
  o["values"] = std::move(values);
  return o;
}

std::vector<CopyTable> read_tables(const Node& n, const SpacePtr& s) {
  std::vector<CopyTable> tables(s->size());
  per_node(n, s->size(), [&](NodeId id, const Node& c) {
    c.object({"upto", "tail"});
    Node upto = c.child("upto");
    std::size_t len = upto.array();
    for (std::size_t i = 0; i < len; ++i) {
      Node e = upto.item(i);
      if (e.array() != 2) e.fail("expected [\"k\", value]");
      std::uint64_t k = e.item(0).natural_text(e.item(0).text(), "copy index");
      tables[id].upto.emplace_back(k, e.item(1).value());
    }
    tables[id].tail = c.child("tail").value();
  });
  return tables;
}

Json tables_json(const std::vector<CopyTable>& tables) {
  Json o = Json::object();
  for (std::size_t id = 0; id < tables.size(); ++id) {
    Json t = Json::object();
    Json upto = Json::array();
    for (const auto& [k, v] : tables[id].upto) upto.push_back(Json::array({str(k), value_json(v)}));
    t["upto"] = std::move(upto);
    t["tail"] = value_json(tables[id].tail);
    o[str(id)] = std::move(t);
  }
  return o;
}

CIFunction make_cifunction(const Node& at, const SpacePtr& s, std::vector<CopyTable> tables) {
  try {
    return CIFunction(s, std::move(tables));
  } catch (const InputError& e) {
    at.fail(e.what());
  }
}

CIFunction read_cifunction(const Node& n) {
  n.object({"kind", "space", "tables"});
  n.kind("cifunction");
  SpacePtr s = read_space(n.child("space"));
  return make_cifunction(n.child("tables"), s, read_tables(n.child("tables"), s));
}

Json cifunction_json(const CIFunction& f) {
  Json o = Json::object();
  o["kind"] = "cifunction";
  o["space"] = space_json(f.space());
  o["tables"] = tables_json(f.tables());
  return o;
}

FunctionSeq read_sequence(const Node& n) {
  n.object({"kind", "limit", "generator"});
  n.kind("sequence");
  QFunction limit = read_qfunction(n.child("limit"));
  Node g = n.child("generator");
  if (!g.json().is_object() || !g.json().contains("type")) g.fail("expected an object with a \"type\"");
  std::string type = g.child("type").text();
  Generator gen;
  if (type == "moving_step") {
    g.object({"type", "designations"});
    Node ds = g.child("designations");
    std::size_t len = ds.array();
    MovingStep ms;
    for (std::size_t i = 0; i < len; ++i) {
      Node d = ds.item(i);
      d.object({"node", "pattern", "alt"});
      Designation des;
      des.node = static_cast<NodeId>(d.child("node").natural());
      des.pattern = d.child("pattern").natural();
      Node alt = d.child("alt");
      if (!alt.json().is_object()) alt.fail("expected an object keyed by node id");
      for (const auto& [k, v] : alt.json().items()) {
        Node c = alt.child(k);
        des.alt[static_cast<NodeId>(c.natural_text(k, "node id"))] = c.value();
      }
      ms.designations.push_back(std::move(des));
    }
    gen = std::move(ms);
  } else if (type == "eventually_limit") {
    g.object({"type", "prefix"});
    Node p = g.child("prefix");
    std::size_t len = p.array();
    EventuallyLimit ev;
    for (std::size_t i = 0; i < len; ++i) {
      ev.prefix.push_back(make_cifunction(p.item(i), limit.space_ptr(), read_tables(p.item(i), limit.space_ptr())));
    }
    gen = std::move(ev);
  } else {
    g.child("type").fail("unknown generator type \"" + type + "\"");
  }
  try {
    return FunctionSeq(std::move(limit), std::move(gen));
  } catch (const InputError& e) {
    g.fail(e.what());
  }
}

Json sequence_json(const FunctionSeq& seq) {
  Json o = Json::object();
  o["kind"] = "sequence";
  o["limit"] = qfunction_json(seq.limit());
  Json g = Json::object();
  if (const auto* ev = std::get_if<EventuallyLimit>(&seq.generator())) {
    g["type"] = "eventually_limit";
    Json prefix = Json::array();
    for (const CIFunction& f : ev->prefix) prefix.push_back(tables_json(f.tables()));
    g["prefix"] = std::move(prefix);
  } else {
    g["type"] = "moving_step";
    Json ds = Json::array();
    for (const Designation& d : std::get<MovingStep>(seq.generator()).designations) {
      Json e = Json::object();
      e["node"] = d.node;
      e["pattern"] = d.pattern;
      Json alt = Json::object();
      for (const auto& [id, v] : d.alt) alt[str(id)] = value_json(v);
      e["alt"] = std::move(alt);
      ds.push_back(std::move(e));
    }
    g["designations"] = std::move(ds);
  }
  o["generator"] = std::move(g);
  return o;
}

// ---- bases

BasisDocument read_basis(const Node& n) {
  n.object({"kind", "norm", "dim", "vectors"});
  n.kind("basis");
  BasisDocument b;
  std::string norm = n.child("norm").text();
  if (norm == "sup") {
    b.space.norm = NormKind::Sup;
  } else if (norm == "l1") {
    b.space.norm = NormKind::L1;
  } else if (norm == "se") {
    b.space.norm = NormKind::Se;
  } else {
    n.child("norm").fail("norm must be sup, l1 or se");
  }
  b.space.dim = n.child("dim").natural();
  if (b.space.dim == 0) n.child("dim").fail("dimension must be positive");
  Node vs = n.child("vectors");
  std::size_t len = vs.array();
  for (std::size_t i = 0; i < len; ++i) {
    Node v = vs.item(i);
    if (v.array() != b.space.dim) v.fail("expected " + str(b.space.dim) + " coordinates");
    Vec x;
    for (std::size_t c = 0; c < b.space.dim; ++c) x.push_back(v.item(c).rational());
    b.vectors.push_back(std::move(x));
  }
  return b;
}

Json basis_json(const BasisDocument& b) {
  Json o = Json::object();
  o["kind"] = "basis";
  o["norm"] = b.space.norm == NormKind::Sup ? "sup" : b.space.norm == NormKind::L1 ? "l1" : "se";
  o["dim"] = b.space.dim;
  Json vs = Json::array();
  for (const Vec& v : b.vectors) {
    Json row = Json::array();
    for (const Rational& q : v) row.push_back(rational_json(q));
    vs.push_back(std::move(row));
  }
  o["vectors"] = std::move(vs);
  return o;
}

// ---- witnesses

PointRef read_point(const Node& n) {
  std::size_t len = n.array();
  PointRef p;
  for (std::size_t i = 0; i < len; ++i) {
    Node s = n.item(i);
    if (s.json().is_object() && s.json().contains("prefix")) {
      s.object({"prefix"});
      p.path.push_back(Step::prefix(s.child("prefix").natural()));
    } else {
      s.object({"recurring", "copy"});
      std::uint64_t copy = s.child("copy").natural();
      if (copy == 0) s.child("copy").fail("copies are numbered from 1");
      p.path.push_back(Step::recurring(s.child("recurring").natural(), copy));
    }
  }
  return p;
}

Json point_json(const PointRef& p) {
  Json a = Json::array();
  for (const Step& s : p.path) {
    Json o = Json::object();
    if (s.kind == Step::Kind::Prefix) {
      o["prefix"] = s.index;
    } else {
      o["recurring"] = s.index;
      o["copy"] = s.copy;
    }
    a.push_back(std::move(o));
  }
  return a;
}

std::vector<std::uint64_t> read_naturals(const Node& n) {
  std::size_t len = n.array();
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < len; ++i) out.push_back(n.item(i).natural());
  return out;
}

WitnessDocument read_witness(const Node& n) {
  if (!n.json().is_object() || !n.json().contains("form")) n.fail("expected an object with a \"form\"");
  std::string form = n.child("form").text();
  if (form == "chain") {
    n.object({"kind", "form", "k", "m", "subsequence", "points", "deltas", "lambda", "eta"});
    n.kind("witness");
    WitnessBundle b;
    b.k = n.child("k").natural();
    b.m = read_naturals(n.child("m"));
    b.indices = read_naturals(n.child("subsequence"));
    Node pts = n.child("points");
    std::size_t np = pts.array();
    for (std::size_t i = 0; i < np; ++i) b.points.push_back(read_point(pts.item(i)));
    Node ds = n.child("deltas");
    std::size_t nd = ds.array();
    for (std::size_t i = 0; i < nd; ++i) b.deltas.push_back(ds.item(i).rational());
    b.lambda = n.child("lambda").rational();
    b.eta = n.child("eta").rational();
    return b;
  }
  if (form == "difference") {
    n.object({"kind", "form", "k", "m", "subsequence", "t", "lambda", "eta"});
    n.kind("witness");
    DifferenceWitness w;
    w.k = n.child("k").natural();
    w.m = read_naturals(n.child("m"));
    w.indices = read_naturals(n.child("subsequence"));
    w.t = read_point(n.child("t"));
    w.lambda = n.child("lambda").rational();
    w.eta = n.child("eta").rational();
    return w;
  }
  n.child("form").fail("form must be chain or difference");
}

Json witness_json(const WitnessDocument& w) {
  Json o = Json::object();
  o["kind"] = "witness";
  if (const auto* b = std::get_if<WitnessBundle>(&w)) {
    o["form"] = "chain";
    o["k"] = b->k;
    o["m"] = b->m;
    o["subsequence"] = b->indices;
    Json pts = Json::array();
    for (const PointRef& p : b->points) pts.push_back(point_json(p));
    o["points"] = std::move(pts);
    Json ds = Json::array();
    for (const Rational& d : b->deltas) ds.push_back(rational_json(d));
    o["deltas"] = std::move(ds);
    o["lambda"] = rational_json(b->lambda);
    o["eta"] = rational_json(b->eta);
  } else {
    const auto& d = std::get<DifferenceWitness>(w);
    o["form"] = "difference";
    o["k"] = d.k;
    o["m"] = d.m;
    o["subsequence"] = d.indices;
    o["t"] = point_json(d.t);
    o["lambda"] = rational_json(d.lambda);
    o["eta"] = rational_json(d.eta);
  }
  return o;
}

Document read_any(const LocatedJson& doc) {
  Node root(doc.value, "", doc);
  if (!root.json().is_object() || !root.json().contains("kind")) root.fail("expected an object with a \"kind\"");
  std::string kind = root.child("kind").text();
  if (kind == "space") return read_space(root);
  if (kind == "qfunction") return read_qfunction(root);
  if (kind == "cifunction") return read_cifunction(root);
  if (kind == "sequence") return read_sequence(root);
  if (kind == "basis") return read_basis(root);
  if (kind == "witness") return read_witness(root);
  root.child("kind").fail("unknown kind \"" + kind + "\"");
}

template <typename T>
T parse_as(std::string_view text, const char* kind) {
  LocatedJson doc = detail::parse_located(text);
  Document d = read_any(doc);
  if (auto* v = std::get_if<T>(&d)) return std::move(*v);
  throw DocumentError(doc.line_of("/kind"), std::string("expected a ") + kind + " document, got " + kind_name(d));
}

}  // namespace

std::string kind_name(const Document& doc) {
  static const char* names[] = {"space", "qfunction", "cifunction", "sequence", "basis", "witness"};
  return names[doc.index()];
}

Document parse_document(std::string_view text) { return read_any(detail::parse_located(text)); }

std::string serialize(const Document& doc) {
  Json j = std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, SpacePtr>) {
          return space_json(*v);
        } else if constexpr (std::is_same_v<T, QFunction>) {
          return qfunction_json(v);
        } else if constexpr (std::is_same_v<T, CIFunction>) {
          return cifunction_json(v);
        } else if constexpr (std::is_same_v<T, FunctionSeq>) {
          return sequence_json(v);
        } else if constexpr (std::is_same_v<T, BasisDocument>) {
          return basis_json(v);
        } else {
          return witness_json(v);
        }
      },
      doc);
  return j.dump(2) + "\n";
}

SpacePtr parse_space(std::string_view text) { return parse_as<SpacePtr>(text, "space"); }
QFunction parse_qfunction(std::string_view text) { return parse_as<QFunction>(text, "qfunction"); }
CIFunction parse_cifunction(std::string_view text) { return parse_as<CIFunction>(text, "cifunction"); }
FunctionSeq parse_sequence(std::string_view text) { return parse_as<FunctionSeq>(text, "sequence"); }
BasisDocument parse_basis(std::string_view text) { return parse_as<BasisDocument>(text, "basis"); }
WitnessDocument parse_witness(std::string_view text) { return parse_as<WitnessDocument>(text, "witness"); }

std::string read_source(const std::string& path) {
  std::ostringstream buf;
  if (path == "-") {
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace oscal
