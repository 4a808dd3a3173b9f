// Command-line front end. Exit codes: 0 success, 1 negative verdict,
// 2 input or usage error, 3 internal failure.

#include <chrono>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "annulus/census.hpp"
#include "annulus/contact.hpp"
#include "annulus/io.hpp"
#include "annulus/pseudo.hpp"
#include "annulus/reduction.hpp"
#include "annulus/render.hpp"
#include "annulus/sparsity.hpp"

using namespace annulus;
using io::json;

namespace {

constexpr const char* kVersion = "1.0.0";

// A failed self-check on something this tool just built.
struct Broken : Error {
  using Error::Error;
};

void emit_text(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) fail("ParseError", "cannot write " + out);
  f << text;
}

void emit(const json& j, const std::string& out) { emit_text(j.dump(2) + "\n", out); }

json edge_ids(const AnnulusMap& m, const EdgeSubset& s) {
  json a = json::array();
  for (int e : s.edges()) a.push_back(m.edge(e).id);
  return a;
}

json report(const std::string& command) {
  return {{"command", command}, {"tool_version", kVersion}};
}

AnnulusMap load_graph(const std::string& path) { return io::graph_from_json(io::read_json(path)); }

template <class F>
auto self_checked(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    const std::string& c = e.code();
    if (c == "EpsilonExhausted" || c == "ValidationFailed" || c == "CrossingEdges" || c == "NotPointed" ||
        c == "BadFaceCount")
      throw Broken(c, std::string(e.what()).substr(c.size() + 2));
    throw;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparsity, inductive constructions and realizations of maps on the annulus"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);
  std::string out;
  app.add_option("-o,--output", out, "write the result here instead of stdout");

  std::string input, other, group_s, surface_s;
  int level = 0, vertices = 0, copies = 3, max_edges = 4;
  std::uint64_t seed = 1;

  auto* check = app.add_subcommand("check", "sparsity and tightness of a map");
  check->add_option("graph", input, "graph file, - for stdin")->required();
  check->add_option("--level", level, "1 or 2")->required()->check(CLI::IsMember({1, 2}));
  check->add_option("--isomorphic", other, "also compare with this graph");

  auto* dec = app.add_subcommand("decompose", "reduce a tight map to its base, printing the certificate");
  dec->add_option("graph", input, "graph file, - for stdin")->required();
  dec->add_option("--level", level, "1 or 2")->required()->check(CLI::IsMember({1, 2}));

  auto* reb = app.add_subcommand("rebuild", "replay a certificate into a map");
  reb->add_option("cert", input, "certificate file, - for stdin")->required();

  auto* gen = app.add_subcommand("generate", "random tight map");
  gen->add_option("--level", level, "1 or 2")->required()->check(CLI::IsMember({1, 2}));
  gen->add_option("--vertices", vertices, "vertex count")->required()->check(CLI::Range(1, 24));
  gen->add_option("--seed", seed, "random seed");

  auto* comp = app.add_subcommand("complete", "add edges until the map is tight");
  comp->add_option("graph", input, "graph file, - for stdin")->required();
  comp->add_option("--level", level, "1 or 2")->required()->check(CLI::IsMember({1, 2}));

  auto* rc = app.add_subcommand("realize-contact", "segment contact system from a certificate");
  rc->add_option("cert", input, "certificate file, - for stdin")->required();
  rc->add_option("--group", group_s, "translation[:x,y] or rotation:k[@x,y]")->required();

  auto* rp = app.add_subcommand("realize-ppt", "pointed pseudotriangulation from a certificate");
  rp->add_option("cert", input, "certificate file, - for stdin")->required();
  rp->add_option("--surface", surface_s, "cylinder, cone:k or plane")->required();

  auto* ext = app.add_subcommand("extract", "validate a contact system or drawing and read off its map");
  ext->add_option("file", input, "contact system or drawing, - for stdin")->required();

  auto* ren = app.add_subcommand("render", "SVG of a contact system, drawing or tight map");
  ren->add_option("file", input, "input file, - for stdin")->required();
  ren->add_option("--copies", copies, "group copies to draw")->check(CLI::PositiveNumber);

  auto* cen = app.add_subcommand("census", "check the sparsity tests against each other on all small maps");
  cen->add_option("--max-edges", max_edges, "largest edge count")->check(CLI::Range(0, 6));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const auto t0 = std::chrono::steady_clock::now();
  auto seconds = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  try {
    if (*check) {
      const AnnulusMap m = load_graph(input);
      const SparsityVerdict v = check_sparse(m, level);
      json r = report("check");
      r["input"] = input;
      r["level"] = level;
      r["vertices"] = m.num_vertices();
      r["edges"] = m.num_edges();
      r["balanced"] = m.balanced();
      r["f"] = m.f_count();
      r["sparse"] = v.sparse;
      r["tight"] = v.tight;
      r["violator"] = v.violator ? edge_ids(m, *v.violator) : json(nullptr);
      bool ok = v.tight;
      if (!other.empty()) {
        r["isomorphic_to"] = other;
        r["isomorphic"] = isomorphic(m, load_graph(other));
        ok = ok && r["isomorphic"].get<bool>();
      }
      r["seconds"] = seconds();
      emit(r, out);
      return ok ? 0 : 1;
    }
    if (*dec) {
      emit(io::to_json(decompose(load_graph(input), level)), out);
      return 0;
    }
    if (*reb) {
      emit(io::to_json(rebuild(io::cert_from_json(io::read_json(input)))), out);
      return 0;
    }
    if (*gen) {
      emit(io::to_json(generate_random_tight(level, vertices, seed)), out);
      json r = report("generate");
      r.update({{"level", level}, {"vertices", vertices}, {"seed", seed}});
      std::cerr << r.dump() << "\n";
      return 0;
    }
    if (*comp) {
      emit(io::to_json(complete_to_tight(load_graph(input), level)), out);
      return 0;
    }
    if (*rc) {
      const auto seq = io::cert_from_json(io::read_json(input));
      const auto g = SymmetryGroup::parse(group_s);
      const ContactSystem s = self_checked([&] { return realize(seq, g); });
      emit(io::to_json(s), out);
      return 0;
    }
    if (*rp) {
      const auto seq = io::cert_from_json(io::read_json(input));
      const auto surf = FlatSurface::parse(surface_s);
      const PptRealization r = self_checked([&] {
        auto x = realize_ppt(seq, surf);
        validate_ppt(x);
        return x;
      });
      emit(io::to_json(r), out);
      return 0;
    }
    if (*ext) {
      const json doc = io::read_json(input);
      json r = report("extract");
      r["input"] = input;
      if (io::classify(doc) == io::DocKind::ContactSystem) {
        const ContactSystem s = io::system_from_json(doc);
        r["group"] = io::to_json(s.group());
        try {
          ContactCert cert = extract_quotient_graph(s);
          r["valid"] = cert.graph.has_value();
          r["free_ends"] = cert.free_ends;
          r["window"] = cert.window;
          r["contacts"] = static_cast<int>(cert.contacts.size());
          r["graph"] = cert.graph ? io::to_json(*cert.graph) : json(nullptr);
          r["matches_stored_graph"] = cert.graph && isomorphic(*cert.graph, s.graph());
          if (!cert.graph) r["reason"] = "contact graph is disconnected";
        } catch (const Error& e) {
          r["valid"] = false;
          r["reason"] = e.what();
        }
      } else if (io::classify(doc) == io::DocKind::Ppt) {
        const PptRealization p = io::ppt_from_json(doc);
        r["group"] = io::to_json(p.group());
        try {
          const AngleReport a = validate_ppt(p);
          r["valid"] = true;
          r["graph"] = io::to_json(ppt_quotient_graph(p));
          r["c"] = a.c;
          r["f"] = a.f;
          r["n"] = a.n;
          r["m"] = a.m;
          json faces = json::array();
          for (size_t f = 0; f < a.face_kind.size(); ++f)
            faces.push_back({{"kind", a.face_kind[f]}, {"convex", a.face_convex[f]}});
          r["faces"] = faces;
        } catch (const Error& e) {
          r["valid"] = false;
          r["reason"] = e.what();
        }
      } else {
        fail("ParseError", "extract expects a contact system or a drawing");
      }
      r["seconds"] = seconds();
      emit(r, out);
      return r["valid"].get<bool>() ? 0 : 1;
    }
    if (*ren) {
      const json doc = io::read_json(input);
      RenderOptions opt;
      opt.copies = copies;
      std::string svg;
      switch (io::classify(doc)) {
        case io::DocKind::ContactSystem: svg = render_svg(io::system_from_json(doc), opt); break;
        case io::DocKind::Ppt: svg = render_svg(io::ppt_from_json(doc), opt); break;
        case io::DocKind::Graph: svg = render_svg(io::graph_from_json(doc), opt); break;
        case io::DocKind::Certificate: svg = render_svg(rebuild(io::cert_from_json(doc)), opt); break;
      }
      emit_text(svg, out);
      return 0;
    }
    if (*cen) {
      json r = report("census");
      r["max_edges"] = max_edges;
      json rows = json::array();
      bool agree = true;
      const auto maps = enumerate_maps(max_edges);
      for (int m = 0; m <= max_edges; ++m) {
        json row{{"edges", m}, {"maps", 0}};
        for (int l : {1, 2}) {
          int sparse = 0, tight = 0, mismatches = 0;
          for (const auto& g : maps) {
            if (g.num_edges() != m) continue;
            const auto a = check_sparse(g, l), b = oracle_sparse(g, l);
            sparse += a.sparse;
            tight += a.tight;
            mismatches += a.sparse != b.sparse || a.tight != b.tight;
          }
          row["level" + std::to_string(l)] = {{"sparse", sparse}, {"tight", tight}, {"oracle_mismatches", mismatches}};
          agree = agree && mismatches == 0;
        }
        int count = 0;
        for (const auto& g : maps) count += g.num_edges() == m;
        row["maps"] = count;
        rows.push_back(row);
      }
      r["rows"] = rows;
      r["agree"] = agree;
      r["seconds"] = seconds();
      emit(r, out);
      return agree ? 0 : 3;
    }
  } catch (const Broken& e) {
    std::cerr << "internal failure: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    const std::string& c = e.code();
    std::cerr << e.what() << "\n";
    if (e.internal()) return 3;
    if (c == "NotTight") return 1;
    return 2;
  }
  return 2;
}
