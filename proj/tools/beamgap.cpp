// Command-line front end.  Every command resolves a lattice source
// (--config file or --builtin square), runs one solver pipeline, and
// writes CSV with a provenance header to stdout or --out.  Exit codes:
// 0 success, 1 domain error (geometry, resonance, numerics), 2 usage.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Dense>

#include "beamgap.hpp"

namespace {

using beamgap::format_number;

struct Options {
  std::string config_path;
  std::string builtin;
  double alpha = 30.0;
  double a = 0.2;
  double h = 0.0;  // zero means 1/64 of the shortest beam
  double lambda_min = 0.0;
  double lambda_max = 200.0;
  int samples = 2000;
  std::string mode = "closed-form";
  std::string epsilons = "0.25,0.125,0.0625";
  std::string k_macro = "1.2,0.5";
  std::string path = "GXMG";
  int points = 32;
  int bands = 8;
  std::string out_path;
};

std::string builtin_tag(const Options& o) {
  return "builtin:square;alpha=" + format_number(o.alpha) +
         ";a=" + format_number(o.a);
}

// Lattice source with the provenance tag and hash the header reports.
struct Source {
  beamgap::UnitCellGraph graph;
  std::string tag;
  std::uint64_t hash = 0;
};

Source resolve_cell(const Options& o) {
  Source s;
  if (!o.config_path.empty()) {
    std::vector<std::string> warnings;
    s.graph = beamgap::load_config(o.config_path, &warnings);
    for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
    s.tag = o.config_path;
    s.hash = beamgap::fnv1a64(beamgap::read_file_bytes(o.config_path));
  } else {
    s.graph = beamgap::build_square_example(o.alpha, o.a);
    s.tag = builtin_tag(o);
    s.hash = beamgap::fnv1a64(s.tag);
  }
  return s;
}

// beta/gaps variant: the builtin cell is represented by its soft segment
// alone so half-lengths too large for the full square stay usable, with
// the cell length 2 + 2a of the square baked in to match the closed forms.
Source resolve_soft(const Options& o, double* cell_length) {
  if (!o.config_path.empty()) {
    *cell_length = 0.0;  // use the graph's own total length
    return resolve_cell(o);
  }
  Source s;
  s.graph = beamgap::build_soft_segment(o.alpha, o.a);
  s.tag = builtin_tag(o);
  s.hash = beamgap::fnv1a64(s.tag);
  *cell_length = 2.0 + 2.0 * o.a;
  return s;
}

double resolve_h(const Options& o, const beamgap::UnitCellGraph& g) {
  return o.h > 0.0 ? o.h : beamgap::default_mesh_size(g);
}

int emit(const std::string& buf, const std::string& out_path) {
  if (out_path.empty()) {
    std::fwrite(buf.data(), 1, buf.size(), stdout);
    return 0;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) {
    std::cerr << "error: cannot open output file: " << out_path << "\n";
    return 1;
  }
  f << buf;
  return f.good() ? 0 : 1;
}

class CsvBuffer {
 public:
  void provenance(const std::string& cmdline, const std::string& tag,
                  std::uint64_t hash, double h) {
    line("# beamgap " + cmdline);
    line("# config " + tag + " fnv1a64=" + beamgap::hex16(hash));
    line("# mesh h=" + format_number(h));
  }
  void line(const std::string& s) {
    buf_ += s;
    buf_ += '\n';
  }
  void row(const std::vector<std::string>& cells) { line(beamgap::csv_join(cells)); }
  const std::string& str() const { return buf_; }

 private:
  std::string buf_;
};

bool parse_double_list(const std::string& s, std::vector<double>* out) {
  out->clear();
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      double v = std::stod(item, &pos);
      if (pos != item.size()) return false;
      out->push_back(v);
    } catch (const std::exception&) {
      return false;
    }
  }
  return !out->empty();
}

int require_source(const Options& o) {
  if (o.config_path.empty() && o.builtin.empty()) {
    std::cerr << "error: specify a lattice with --config PATH or --builtin square\n";
    return 2;
  }
  return 0;
}

int run_homogenize(const Options& o, const std::string& cmdline) {
  if (int rc = require_source(o)) return rc;
  Source src = resolve_cell(o);
  double h = resolve_h(o, src.graph);

  beamgap::TensorDiagnostics diag;
  beamgap::HomogenizedTensor ch = beamgap::homogenized_tensor(src.graph, h, -1, &diag);

  bool have_closed = !o.builtin.empty();
  beamgap::HomogenizedTensor ref;
  if (have_closed) {
    for (const beamgap::Beam& b : src.graph.beams)
      if (b.component == beamgap::Component::Stiff) {
        ref = beamgap::closed_form_tensor(b.material);
        break;
      }
  }

  CsvBuffer csv;
  csv.provenance(cmdline, src.tag, src.hash, h);
  csv.line("name,value,closed_form,rel_error");
  auto entry = [&](const char* name, double fe, double cf) {
    if (have_closed) {
      // Relative to the closed value, absolute where that value vanishes.
      double err = std::abs(fe - cf) / std::max(std::abs(cf), 1.0);
      csv.row({name, format_number(fe), format_number(cf), format_number(err)});
    } else {
      csv.row({name, format_number(fe), "nan", "nan"});
    }
  };
  entry("C1111", ch(1, 1, 1, 1), ref(1, 1, 1, 1));
  entry("C1122", ch(1, 1, 2, 2), ref(1, 1, 2, 2));
  entry("C1112", ch(1, 1, 1, 2), ref(1, 1, 1, 2));
  entry("C2222", ch(2, 2, 2, 2), ref(2, 2, 2, 2));
  entry("C1222", ch(1, 2, 2, 2), ref(1, 2, 2, 2));
  entry("C1212", ch(1, 2, 1, 2), ref(1, 2, 1, 2));
  csv.row({"major_asymmetry", format_number(diag.major_asymmetry), "nan", "nan"});
  csv.row({"minor_asymmetry", format_number(diag.minor_asymmetry), "nan", "nan"});
  return emit(csv.str(), o.out_path);
}

int run_beta(const Options& o, const std::string& cmdline) {
  if (int rc = require_source(o)) return rc;
  bool closed = o.mode == "closed-form";
  if (closed && o.builtin.empty()) {
    std::cerr << "error: closed-form mode needs --builtin square (no closed "
                 "forms exist for arbitrary configs)\n";
    return 2;
  }

  double cell_length = 0.0;
  Source src = resolve_soft(o, &cell_length);
  double h = resolve_h(o, src.graph);
  double lmin = o.lambda_min, lmax = o.lambda_max;
  if (!(lmax > lmin)) {
    std::cerr << "error: --lambda-max must exceed --lambda-min\n";
    return 2;
  }

  CsvBuffer csv;
  csv.provenance(cmdline, src.tag, src.hash, h);
  // Midpoint sampling keeps lambda strictly inside (lmin, lmax), so a zero
  // lower bound never evaluates the model at lambda = 0.
  auto sample = [&](int i) {
    return lmin + (i + 0.5) * (lmax - lmin) / o.samples;
  };

  if (closed) {
    csv.line("lambda,beta1,beta2,class");
    for (int i = 0; i < o.samples; ++i) {
      double lam = sample(i);
      try {
        double b1 = beamgap::beta1_closed(lam, o.a);
        double b2 = beamgap::beta2_closed(lam, o.a);
        beamgap::PointClass pc =
            beamgap::classify_point(std::min(b1, b2), std::max(b1, b2));
        csv.row({format_number(lam), format_number(b1), format_number(b2),
                 beamgap::to_string(pc)});
      } catch (const beamgap::pole_error&) {
        csv.row({format_number(lam), "nan", "nan",
                 beamgap::to_string(beamgap::PointClass::Resonance)});
      }
    }
  } else {
    beamgap::SoftModel model(beamgap::soft_subgraph(src.graph), h);
    double total = cell_length > 0 ? cell_length : src.graph.total_length();
    csv.line("lambda,b11,b12,b22,eig1,eig2,class");
    for (int i = 0; i < o.samples; ++i) {
      double lam = sample(i);
      try {
        Eigen::Matrix2d b = beamgap::beta_matrix(model, total, lam);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(b);
        beamgap::PointClass pc =
            beamgap::classify_point(es.eigenvalues()[0], es.eigenvalues()[1]);
        csv.row({format_number(lam), format_number(b(0, 0)), format_number(b(0, 1)),
                 format_number(b(1, 1)), format_number(es.eigenvalues()[0]),
                 format_number(es.eigenvalues()[1]), beamgap::to_string(pc)});
      } catch (const beamgap::resonance_error&) {
        csv.row({format_number(lam), "nan", "nan", "nan", "nan", "nan",
                 beamgap::to_string(beamgap::PointClass::Resonance)});
      }
    }
  }
  return emit(csv.str(), o.out_path);
}

int run_gaps(const Options& o, const std::string& cmdline) {
  if (int rc = require_source(o)) return rc;
  bool closed = o.mode == "closed-form";
  if (closed && o.builtin.empty()) {
    std::cerr << "error: closed-form mode needs --builtin square (no closed "
                 "forms exist for arbitrary configs)\n";
    return 2;
  }

  double cell_length = 0.0;
  Source src = resolve_soft(o, &cell_length);
  double h = resolve_h(o, src.graph);

  beamgap::ScanResult res =
      closed ? beamgap::scan_gaps(o.a, o.lambda_max, o.samples)
             : beamgap::scan_gaps(src.graph, o.lambda_max, o.samples, h, cell_length);

  CsvBuffer csv;
  csv.provenance(cmdline, src.tag, src.hash, h);
  csv.line("lambda_lo,lambda_hi,class,boundary_type");
  for (const beamgap::GapInterval& gi : res.intervals)
    csv.row({format_number(gi.lo), format_number(gi.hi), beamgap::to_string(gi.cls),
             beamgap::to_string(gi.lower_boundary)});
  return emit(csv.str(), o.out_path);
}

int run_bloch(const Options& o, const std::string& cmdline) {
  if (int rc = require_source(o)) return rc;
  Source src = resolve_cell(o);
  double h = resolve_h(o, src.graph);

  beamgap::BandStructure bs =
      beamgap::band_structure(src.graph, o.path, o.points, o.bands, h);

  CsvBuffer csv;
  csv.provenance(cmdline, src.tag, src.hash, h);
  csv.line("path_coord,k1,k2,band_index,lambda,omega");
  for (std::size_t p = 0; p < bs.path.size(); ++p)
    for (int j = 0; j < bs.bands.cols(); ++j) {
      double lam = bs.bands(static_cast<int>(p), j);
      double omega = std::sqrt(std::max(lam, 0.0));
      csv.row({format_number(bs.path[p].coord), format_number(bs.path[p].k.x()),
               format_number(bs.path[p].k.y()), std::to_string(j + 1),
               format_number(lam), format_number(omega)});
    }
  for (const auto& gap : bs.gaps)
    csv.line("# gap " + format_number(gap.lo) + " " + format_number(gap.hi));
  return emit(csv.str(), o.out_path);
}

int run_validate(const Options& o, const std::string& cmdline) {
  if (int rc = require_source(o)) return rc;
  std::vector<double> eps, kv;
  if (!parse_double_list(o.epsilons, &eps)) {
    std::cerr << "error: --epsilons wants a comma-separated list of numbers\n";
    return 2;
  }
  if (!parse_double_list(o.k_macro, &kv) || kv.size() != 2) {
    std::cerr << "error: --k wants two comma-separated numbers\n";
    return 2;
  }
  for (double e : eps)
    if (!(e > 0)) {
      std::cerr << "error: epsilon values must be positive\n";
      return 2;
    }

  Source src = resolve_cell(o);
  double h = resolve_h(o, src.graph);
  std::vector<beamgap::LimitValidationRow> rows =
      beamgap::validate_limit(src.graph, eps, beamgap::Vec2{kv[0], kv[1]}, h);

  CsvBuffer csv;
  csv.provenance(cmdline, src.tag, src.hash, h);
  csv.line("epsilon,lambda_bloch,lambda_limit,rel_dev,order_estimate");
  for (const beamgap::LimitValidationRow& r : rows)
    csv.row({format_number(r.epsilon), format_number(r.lambda_bloch),
             format_number(r.lambda_limit), format_number(r.rel_dev),
             format_number(r.order_estimate)});
  return emit(csv.str(), o.out_path);
}

void add_lattice_options(CLI::App* sub, Options* o) {
  auto* cfg = sub->add_option("--config", o->config_path,
                              "lattice description file (JSON)")
                  ->check(CLI::ExistingFile);
  auto* bi = sub->add_option("--builtin", o->builtin,
                             "built-in lattice family")
                 ->check(CLI::IsMember({"square"}));
  cfg->excludes(bi);
  bi->excludes(cfg);
  sub->add_option("--alpha", o->alpha, "soft-segment angle in degrees (builtin)")
      ->needs(bi);
  sub->add_option("--a", o->a, "soft-segment half-length (builtin)")
      ->check(CLI::PositiveNumber)
      ->needs(bi);
}

void add_mesh_option(CLI::App* sub, Options* o) {
  sub->add_option("--h", o->h, "target element size (default: shortest beam / 64)")
      ->check(CLI::PositiveNumber);
}

void add_out_option(CLI::App* sub, Options* o) {
  sub->add_option("--out", o->out_path, "write CSV here instead of stdout");
}

void add_mode_option(CLI::App* sub, Options* o) {
  sub->add_option("--mode", o->mode, "closed-form or fe")
      ->check(CLI::IsMember({"closed-form", "fe"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Floquet-Bloch band structure and high-contrast limit models "
               "for periodic beam lattices"};
  // The mesh option is spelled --h, so help must not claim -h.
  app.set_help_flag("--help", "print usage and exit");
  app.require_subcommand(1);
  Options o;
  auto add_subcommand = [&](const std::string& name, const std::string& desc) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->set_help_flag("--help", "print usage and exit");
    return sub;
  };

  CLI::App* homogenize = add_subcommand(
      "homogenize", "effective elasticity tensor of the stiff skeleton");
  add_lattice_options(homogenize, &o);
  add_mesh_option(homogenize, &o);
  add_out_option(homogenize, &o);

  CLI::App* beta = add_subcommand(
      "beta", "soft-resonance coupling matrix over a lambda range");
  add_lattice_options(beta, &o);
  add_mesh_option(beta, &o);
  add_mode_option(beta, &o);
  beta->add_option("--lambda-min", o.lambda_min, "lower end of the lambda range")
      ->check(CLI::NonNegativeNumber);
  beta->add_option("--lambda-max", o.lambda_max, "upper end of the lambda range")
      ->check(CLI::PositiveNumber);
  beta->add_option("--samples", o.samples, "number of lambda samples")
      ->check(CLI::PositiveNumber);
  add_out_option(beta, &o);

  CLI::App* gaps = add_subcommand(
      "gaps", "band/gap classification of (0, lambda-max]");
  add_lattice_options(gaps, &o);
  add_mesh_option(gaps, &o);
  add_mode_option(gaps, &o);
  gaps->add_option("--lambda-max", o.lambda_max, "upper end of the scan")
      ->check(CLI::PositiveNumber);
  gaps->add_option("--samples", o.samples, "scan resolution (at least 100)")
      ->check(CLI::PositiveNumber);
  add_out_option(gaps, &o);

  CLI::App* bloch = add_subcommand(
      "bloch", "band structure along a Brillouin-zone path");
  add_lattice_options(bloch, &o);
  add_mesh_option(bloch, &o);
  bloch->add_option("--path", o.path, "zone corners, letters G X M")
      ->check(CLI::Validator(
          [](std::string& s) {
            if (s.size() < 2) return std::string("path needs at least two corners");
            for (char c : s)
              if (c != 'G' && c != 'X' && c != 'M')
                return std::string("path may only contain the letters G, X, M");
            return std::string();
          },
          "GXM"));
  bloch->add_option("--points", o.points, "samples per path leg")
      ->check(CLI::PositiveNumber);
  bloch->add_option("--bands", o.bands, "number of bands")
      ->check(CLI::PositiveNumber);
  add_out_option(bloch, &o);

  CLI::App* validate = add_subcommand(
      "validate", "scaled Bloch spectra against the high-contrast limit");
  add_lattice_options(validate, &o);
  add_mesh_option(validate, &o);
  validate->add_option("--epsilons", o.epsilons,
                       "comma-separated cell sizes (contrast = epsilon^2)");
  validate->add_option("--k", o.k_macro, "macro wavevector, two comma-separated numbers");
  add_out_option(validate, &o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  // The provenance header records the invocation, not the binary's path.
  std::string cmdline;
  for (int i = 1; i < argc; ++i) {
    if (i > 1) cmdline += ' ';
    cmdline += argv[i];
  }

  try {
    if (homogenize->parsed()) return run_homogenize(o, cmdline);
    if (beta->parsed()) return run_beta(o, cmdline);
    if (gaps->parsed()) return run_gaps(o, cmdline);
    if (bloch->parsed()) return run_bloch(o, cmdline);
    if (validate->parsed()) return run_validate(o, cmdline);
  } catch (const beamgap::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
