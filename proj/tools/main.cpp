// grafcat: command-line front end over the JSON file formats.
//
// Exit status: 0 success, 1 validation failure, 2 unreadable input or bad
// arguments.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "grafcat/bm.hpp"
#include "grafcat/cospan.hpp"
#include "grafcat/dot.hpp"
#include "grafcat/json_io.hpp"
#include "grafcat/oracle.hpp"

namespace {

using namespace grafcat;

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kParse = 2;

/// An input that failed its structural checks.
struct Invalid {
  std::string what;
  ValidationReport report;
};

class Output {
 public:
  explicit Output(const std::string& path) : path_(path) {}
  void write(const std::string& text) {
    if (path_.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream out(path_, std::ios::binary);
    if (!out) throw ParseError("cannot write '" + path_ + "'");
    out << text;
  }

 private:
  std::string path_;
};

void require(const std::string& what, const ValidationReport& r) {
  if (!r) throw Invalid{what, r};
}

BMMorphism load_bm_morphism(const std::string& path) {
  Document doc = load_document(path);
  if (doc.kind != kind::bm_morphism) throw ParseError(path + ": expected kind 'bm-morphism', got '" + doc.kind + "'");
  BMMorphism h = bm_morphism_from_json(doc.body, doc.base);
  require(path, validate_bm_morphism(h));
  return h;
}

BMGraph load_bm_like(const std::string& path) {
  Document doc = load_document(path);
  if (doc.kind == kind::bm_graph) {
    BMGraph g = bm_graph_from_json(doc.body, doc.base);
    require(path, validate_bm_graph(g));
    return g;
  }
  if (doc.kind == kind::jk_graph) {
    JKGraph g = jk_graph_from_json(doc.body, doc.base);
    require(path, validate_graph(g));
    if (!isolated_edges(g).empty()) throw Error(path + ": graph has isolated edges");
    return phi1_graph_inv(g);
  }
  throw ParseError(path + ": expected a graph, got kind '" + doc.kind + "'");
}

json validation_json(const std::string& k, const ValidationReport& r) {
  return {{"kind", "validation-report"}, {"input_kind", k}, {"valid", r.ok()}, {"violations", r.violations}};
}

int cmd_validate(const std::string& path, Output& out) {
  Document doc = load_document(path);
  ValidationReport r;
  json extra = json::object();
  const auto& k = doc.kind;
  if (k == kind::jk_graph) {
    JKGraph g = jk_graph_from_json(doc.body, doc.base);
    r = validate_graph(g);
    if (r) extra["effective"] = is_effective(g);
  } else if (k == kind::bm_graph) {
    r = validate_bm_graph(bm_graph_from_json(doc.body, doc.base));
  } else if (k == kind::bm_morphism) {
    BMMorphism h = bm_morphism_from_json(doc.body, doc.base);
    r = validate_bm_morphism(h);
    if (r) {
      auto c = classify_bm(h);
      extra["classification"] = {{"isomorphism", c.isomorphism}, {"grafting", c.grafting},
                                 {"compression", c.compression}, {"contraction", c.contraction},
                                 {"merger", c.merger}};
    }
  } else if (k == kind::etale) {
    EtaleMorphism m = etale_from_json(doc.body, doc.base);
    r = validate_etale(m);
    if (r) extra["reduced_cover"] = is_reduced_cover(m);
  } else if (k == kind::refinement) {
    r = validate_refinement(refinement_from_json(doc.body, doc.base));
  } else if (k == kind::cospan) {
    r = validate_cospan(cospan_from_json(doc.body, doc.base));
  } else if (k == kind::species) {
    r = validate_species(species_from_json(doc.body, doc.base));
  } else {
    throw ParseError(path + ": unknown kind '" + k + "'");
  }
  json report = validation_json(k, r);
  report.update(extra);
  out.write(dump(report));
  if (!r) {
    std::cerr << path << ": invalid: " << r.str() << "\n";
    return kInvalid;
  }
  return kOk;
}

int cmd_compose(const std::string& p1, const std::string& p2, Output& out) {
  Document d1 = load_document(p1), d2 = load_document(p2);
  if (d1.kind != d2.kind) throw ParseError("compose: inputs have different kinds");
  const auto& k = d1.kind;
  if (k == kind::bm_morphism) {
    auto g = bm_morphism_from_json(d1.body, d1.base), c = bm_morphism_from_json(d2.body, d2.base);
    require(p1, validate_bm_morphism(g));
    require(p2, validate_bm_morphism(c));
    out.write(dump(to_json(compose_bm(g, c))));
  } else if (k == kind::etale) {
    auto m1 = etale_from_json(d1.body, d1.base), m2 = etale_from_json(d2.body, d2.base);
    require(p1, validate_etale(m1));
    require(p2, validate_etale(m2));
    out.write(dump(to_json(compose_etale(m1, m2))));
  } else if (k == kind::refinement) {
    auto r1 = refinement_from_json(d1.body, d1.base), r2 = refinement_from_json(d2.body, d2.base);
    require(p1, validate_refinement(r1));
    require(p2, validate_refinement(r2));
    out.write(dump(to_json(compose_refinements(r1, r2))));
  } else if (k == kind::cospan) {
    auto c1 = cospan_from_json(d1.body, d1.base), c2 = cospan_from_json(d2.body, d2.base);
    require(p1, validate_cospan(c1));
    require(p2, validate_cospan(c2));
    out.write(dump(to_json(compose_cospan(c1, c2))));
  } else {
    throw ParseError("compose: kind '" + k + "' cannot be composed");
  }
  return kOk;
}

int cmd_factorise(const std::string& path, Output& out) {
  BMMorphism h = load_bm_morphism(path);
  auto f = factorise_bm(h);
  json g = to_json(f.ghost);
  out.write(dump({{"kind", "bm-factorisation"}, {"ghost", g}, {"grafting", to_json(f.grafting)},
                  {"compression", to_json(f.compression)}}));
  return kOk;
}

int cmd_phi(const std::string& path, Output& out) {
  out.write(dump(to_json(phi(load_bm_morphism(path)))));
  return kOk;
}

int cmd_pushout(const std::string& rpath, const std::string& cpath, Output& out) {
  Document dr = load_document(rpath), dc = load_document(cpath);
  if (dr.kind != kind::refinement) throw ParseError(rpath + ": expected kind 'refinement'");
  if (dc.kind != kind::etale) throw ParseError(cpath + ": expected kind 'etale'");
  Refinement gen = refinement_from_json(dr.body, dr.base);
  EtaleMorphism rc = etale_from_json(dc.body, dc.base);
  require(rpath, validate_refinement(gen));
  require(cpath, validate_reduced_cover(rc));
  auto po = pushout_gen_rc(gen, rc);
  out.write(dump({{"kind", "pushout"}, {"generic", to_json(po.generic)}, {"cover", to_json(po.cover)}}));
  return kOk;
}

int cmd_enumerate(std::size_t nv, std::size_t nf, Output& out) {
  json list = json::array();
  for (const auto& g : enumerate_bm_graphs({nv, nf, nv})) list.push_back(to_json(g));
  out.write(dump({{"kind", "bm-graph-list"}, {"count", list.size()}, {"graphs", list}}));
  return kOk;
}

int cmd_hom_count(const std::string& p1, const std::string& p2, std::optional<std::size_t> apex, Output& out) {
  BMGraph tau = load_bm_like(p1), rho = load_bm_like(p2);
  EnumBounds b{0, 0, apex.value_or(tau.vertices.size())};
  HomCountRow row = hom_count(tau, rho, b);
  out.write(dump(to_json(row)));
  return row.bijection_verified ? kOk : kInvalid;
}

int cmd_check_equivalence(std::size_t nv, std::size_t nf, std::optional<std::size_t> apex, Output& out) {
  EnumBounds b{nv, nf, apex.value_or(nv)};
  auto report = check_equivalence(b);
  std::string lines;
  for (const auto& row : report.rows) lines += to_json(row).dump() + "\n";
  out.write(lines);

  std::ostringstream table;
  table << std::left << std::setw(36) << "source" << std::setw(36) << "target" << std::right << std::setw(6) << "BM"
        << std::setw(8) << "Cosp" << "  status\n";
  for (const auto& row : report.rows)
    table << std::left << std::setw(36) << describe(row.source) << std::setw(36) << describe(row.target)
          << std::right << std::setw(6) << row.bm_count << std::setw(8) << row.cospan_count << "  "
          << (row.bijection_verified ? "pass" : "FAIL " + row.note) << "\n";
  table << report.rows.size() << " pairs, " << report.failures() << " failures\n";
  std::cerr << table.str();
  return report.ok() ? kOk : kInvalid;
}

int cmd_export_dot(const std::string& path, Output& out) {
  Document doc = load_document(path);
  JKGraph g;
  if (doc.kind == kind::jk_graph) {
    g = jk_graph_from_json(doc.body, doc.base);
    require(path, validate_graph(g));
  } else if (doc.kind == kind::bm_graph) {
    BMGraph b = bm_graph_from_json(doc.body, doc.base);
    require(path, validate_bm_graph(b));
    g = phi1_graph(b);
  } else {
    throw ParseError(path + ": expected a graph, got kind '" + doc.kind + "'");
  }
  out.write(to_dot(g));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graphs with open-ended edges: two encodings and their comparison"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string output;
  app.add_option("-o,--output", output, "Write the result here instead of standard output");

  std::string in1, in2;
  std::size_t max_vertices = 2, max_flags = 4, apex_value = 0;

  auto* validate = app.add_subcommand("validate", "Check any JSON document against its invariants");
  validate->add_option("file", in1)->required();
  auto* compose = app.add_subcommand("compose", "Compose two morphisms of the same kind (first, then second)");
  compose->add_option("first", in1)->required();
  compose->add_option("second", in2)->required();
  auto* factorise = app.add_subcommand("factorise", "Grafting-then-compression factorisation of a BM morphism");
  factorise->add_option("morphism", in1)->required();
  auto* phi_cmd = app.add_subcommand("phi", "The cospan of a BM morphism");
  phi_cmd->add_option("morphism", in1)->required();
  auto* pushout = app.add_subcommand("pushout", "Pushout of a refinement along a reduced cover");
  pushout->add_option("refinement", in1)->required();
  pushout->add_option("cover", in2)->required();
  auto* enumerate = app.add_subcommand("enumerate", "BM graphs up to isomorphism within bounds");
  enumerate->add_option("--max-vertices", max_vertices)->required();
  enumerate->add_option("--max-flags", max_flags)->required();
  auto* hom = app.add_subcommand("hom-count", "Compare BM and cospan hom-set sizes for two graphs");
  hom->add_option("source", in1)->required();
  hom->add_option("target", in2)->required();
  auto* hom_apex = hom->add_option("--apex-bound", apex_value, "Largest apex vertex count (default: source size)");
  auto* check = app.add_subcommand("check-equivalence", "Exhaustive hom-set comparison over all graph pairs");
  check->add_option("--max-vertices", max_vertices)->required();
  check->add_option("--max-flags", max_flags)->required();
  auto* check_apex = check->add_option("--apex-bound", apex_value, "Largest apex vertex count (default: max vertices)");
  auto* dot = app.add_subcommand("export-dot", "Graphviz rendering of a graph");
  dot->add_option("graph", in1)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  }

  Output out(output);
  auto apex_of = [&](CLI::Option* opt) { return opt->count() ? std::optional<std::size_t>(apex_value) : std::nullopt; };
  try {
    if (*validate) return cmd_validate(in1, out);
    if (*compose) return cmd_compose(in1, in2, out);
    if (*factorise) return cmd_factorise(in1, out);
    if (*phi_cmd) return cmd_phi(in1, out);
    if (*pushout) return cmd_pushout(in1, in2, out);
    if (*enumerate) return cmd_enumerate(max_vertices, max_flags, out);
    if (*hom) return cmd_hom_count(in1, in2, apex_of(hom_apex), out);
    if (*check) return cmd_check_equivalence(max_vertices, max_flags, apex_of(check_apex), out);
    if (*dot) return cmd_export_dot(in1, out);
  } catch (const Invalid& e) {
    std::cerr << e.what << ": invalid: " << e.report.str() << "\n";
    return kInvalid;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  }
  return kParse;
}
