#include "ddid/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ddid::io {

using nlohmann::json;

namespace {

json parse_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw format_error(file.string() + ": " + e.what());
  }
}

double finite_number(const json& j, const char* field) {
  if (!j.contains(field) || !j[field].is_number())
    throw format_error(std::string("missing or non-numeric field \"") + field + "\"");
  const double v = j[field].get<double>();
  if (!std::isfinite(v))
    throw format_error(std::string("non-finite value in field \"") + field + "\"");
  return v;
}

DiscreteMeasure measure_from(const json& j) {
  if (!j.contains("atoms") || !j["atoms"].is_array()) throw format_error("expected \"atoms\" array");
  std::vector<Atom> atoms;
  for (const auto& a : j["atoms"]) {
    Atom atom;
    atom.location = Point(finite_number(a, "tau"), finite_number(a, "nu"));
    atom.weight = Complex(finite_number(a, "re"), finite_number(a, "im"));
    atoms.push_back(atom);
  }
  try {
    return DiscreteMeasure(std::move(atoms));
  } catch (const std::invalid_argument& e) {
    throw format_error(e.what());
  }
}

SupportSet support_from(const json& j) {
  if (!j.contains("atoms") || !j["atoms"].is_array()) throw format_error("expected \"atoms\" array");
  std::vector<Point> pts;
  for (const auto& a : j["atoms"]) pts.push_back(Point(finite_number(a, "tau"), finite_number(a, "nu")));
  try {
    return SupportSet(std::move(pts));
  } catch (const std::invalid_argument& e) {
    throw format_error(e.what());
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text_atomic(const std::filesystem::path& file, const std::string& text) {
  const std::filesystem::path tmp = file.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, file);
}

DiscreteMeasure read_measure(const std::filesystem::path& file) {
  return measure_from(parse_file(file));
}
SupportSet read_support(const std::filesystem::path& file) {
  return support_from(parse_file(file));
}
DiscreteMeasure measure_from_json(const std::string& text) {
  try {
    return measure_from(json::parse(text));
  } catch (const json::exception& e) {
    throw format_error(e.what());
  }
}
SupportSet support_from_json(const std::string& text) {
  try {
    return support_from(json::parse(text));
  } catch (const json::exception& e) {
    throw format_error(e.what());
  }
}

GaborExpansion read_gabor(const std::filesystem::path& file) {
  const json j = parse_file(file);
  if (!j.contains("terms") || !j["terms"].is_array()) throw format_error("expected \"terms\" array");
  std::vector<GaborTerm> terms;
  for (const auto& t : j["terms"]) {
    terms.push_back({Complex(finite_number(t, "re"), finite_number(t, "im")),
                     Point(finite_number(t, "tau"), finite_number(t, "nu"))});
  }
  return GaborExpansion(std::move(terms));
}

SampledSignal read_sampled(const std::filesystem::path& file) {
  const json j = parse_file(file);
  const double t0 = finite_number(j, "t0");
  const double dt = finite_number(j, "dt");
  if (!j.contains("re") || !j.contains("im") || !j["re"].is_array() || !j["im"].is_array())
    throw format_error("expected \"re\" and \"im\" arrays");
  if (j["re"].size() != j["im"].size()) throw format_error("re/im length mismatch");
  std::vector<Complex> s(j["re"].size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double re = j["re"][k].get<double>();
    const double im = j["im"][k].get<double>();
    if (!std::isfinite(re) || !std::isfinite(im)) throw format_error("non-finite sample");
    s[k] = Complex(re, im);
  }
  if (!(dt > 0.0)) throw format_error("dt must be > 0");
  return SampledSignal(t0, dt, std::move(s));
}

void write_measure(const DiscreteMeasure& mu, const std::filesystem::path& file) {
  json atoms = json::array();
  for (const auto& a : mu.atoms())
    atoms.push_back({{"tau", a.location.tau},
                     {"nu", a.location.nu},
                     {"re", a.weight.real()},
                     {"im", a.weight.imag()}});
  write_text_atomic(file, json{{"atoms", atoms}}.dump(2) + "\n");
}

void write_support(const SupportSet& s, const std::filesystem::path& file) {
  json atoms = json::array();
  for (const auto& p : s.points()) atoms.push_back({{"tau", p.tau}, {"nu", p.nu}});
  write_text_atomic(file, json{{"atoms", atoms}}.dump(2) + "\n");
}

void write_gabor(const GaborExpansion& x, const std::filesystem::path& file) {
  json terms = json::array();
  for (const auto& t : x.terms())
    terms.push_back({{"re", t.coeff.real()},
                     {"im", t.coeff.imag()},
                     {"tau", t.loc.tau},
                     {"nu", t.loc.nu}});
  write_text_atomic(file, json{{"terms", terms}}.dump(2) + "\n");
}

void write_sampled(const SampledSignal& x, const std::filesystem::path& file) {
  json re = json::array(), im = json::array();
  for (const auto& v : x.samples) {
    re.push_back(v.real());
    im.push_back(v.imag());
  }
  write_text_atomic(file, json{{"t0", x.t0}, {"dt", x.dt}, {"re", re}, {"im", im}}.dump() + "\n");
}

void write_density_csv(const DensityCurve& curve, const std::filesystem::path& file) {
  std::ostringstream out;
  out << "R,count,ratio\n";
  for (const auto& e : curve.entries)
    out << format_double(e.r) << ',' << e.count << ',' << format_double(e.ratio) << '\n';
  write_text_atomic(file, out.str());
}

void write_ladder_csv(const std::vector<std::tuple<int, double, double>>& rows,
                      const std::filesystem::path& file) {
  std::ostringstream out;
  out << "size,lower,upper\n";
  for (const auto& [n, lo, hi] : rows)
    out << n << ',' << format_double(lo) << ',' << format_double(hi) << '\n';
  write_text_atomic(file, out.str());
}

void write_stft_csv(const STFTField& field, const std::filesystem::path& file) {
  std::ostringstream out;
  out << "tau,nu,re,im\n";
  for (std::size_t i = 0; i < field.grid.ntau(); ++i)
    for (std::size_t j = 0; j < field.grid.nnu(); ++j) {
      const Point p = field.grid.node(i, j);
      const Complex v = field.at(i, j);
      out << format_double(p.tau) << ',' << format_double(p.nu) << ','
          << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
    }
  write_text_atomic(file, out.str());
}

void write_fock_grid_csv(const FockFunction& f, const TFGrid& grid,
                         const std::filesystem::path& file) {
  std::ostringstream out;
  out << "re(z),im(z),log_abs,arg\n";
  for (std::size_t i = 0; i < grid.ntau(); ++i)
    for (std::size_t j = 0; j < grid.nnu(); ++j) {
      const Point p = grid.node(i, j);
      const LogComplex v = f(p.to_complex());
      out << format_double(p.tau) << ',' << format_double(p.nu) << ','
          << (v.zero ? "-inf" : format_double(v.log_abs)) << ','
          << format_double(v.zero ? 0.0 : v.arg) << '\n';
    }
  write_text_atomic(file, out.str());
}

void write_sweep_csv(const std::vector<std::array<double, 4>>& rows,
                     const std::filesystem::path& file) {
  std::ostringstream out;
  out << "noise,max_pos_err,max_wt_err,spurious_norm\n";
  for (const auto& r : rows)
    out << format_double(r[0]) << ',' << format_double(r[1]) << ',' << format_double(r[2]) << ','
        << format_double(r[3]) << '\n';
  write_text_atomic(file, out.str());
}

std::string to_json(const RieszBounds& b) {
  return json{{"lower", b.lower}, {"upper", b.upper}, {"support_size", b.support_size}}.dump(2) +
         "\n";
}

std::string to_json(const IdentifiabilityConstants& c) {
  return json{{"C1", c.c1},     {"C2", c.c2},         {"trials", c.trials},
              {"p", c.p},       {"argmin", c.argmin}, {"argmax", c.argmax}}
             .dump(2) +
         "\n";
}

std::string to_json(const RecoveryReport& r) {
  json matched = json::array();
  for (const auto& m : r.matched) {
    matched.push_back({{"target", {{"tau", m.target.location.tau},
                                   {"nu", m.target.location.nu},
                                   {"re", m.target.weight.real()},
                                   {"im", m.target.weight.imag()}}},
                       {"recovered", {{"tau", m.recovered.location.tau},
                                      {"nu", m.recovered.location.nu},
                                      {"re", m.recovered.weight.real()},
                                      {"im", m.recovered.weight.imag()}}},
                       {"position_error", m.position_error},
                       {"weight_error", m.weight_error},
                       {"position_ok", m.position_ok},
                       {"weight_ok", m.weight_ok}});
  }
  json missed = json::array();
  for (const auto& a : r.missed)
    missed.push_back({{"tau", a.location.tau},
                      {"nu", a.location.nu},
                      {"re", a.weight.real()},
                      {"im", a.weight.imag()}});
  json spurious = json::array();
  for (const auto& a : r.spurious.atoms())
    spurious.push_back({{"tau", a.location.tau},
                        {"nu", a.location.nu},
                        {"re", a.weight.real()},
                        {"im", a.weight.imag()}});
  return json{{"epsilon", r.epsilon},
              {"p", r.p},
              {"matched", matched},
              {"missed", missed},
              {"spurious", spurious},
              {"spurious_norm", r.spurious_norm},
              {"bound", r.bound},
              {"spurious_ok", r.spurious_ok}}
             .dump(2) +
         "\n";
}

}  // namespace ddid::io
