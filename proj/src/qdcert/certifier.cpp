#include "qdcert/certifier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qdcert/errors.hpp"

namespace qdcert {

Int CertificateConfig::p() const {
  Int best = 0;
  for (const auto& g : generators) {
    const Int m = g.max_abs_entry();
    if (m > best) best = m;
  }
  return best;
}

namespace {

NormMethod parse_method(const std::string& s) {
  if (s == "power") return NormMethod::power;
  if (s == "dense") return NormMethod::dense;
  throw ConfigError("norm_method must be \"power\" or \"dense\", got \"" + s + "\"");
}

template <typename T>
T get_or(const Json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

}  // namespace

CertificateConfig config_from_json(const Json& j) {
  try {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    CertificateConfig cfg;
    cfg.d = j.at("d").get<int>();
    if (cfg.d < 2) throw ConfigError("d must be >= 2");
    cfg.theta = theta_from_json(j.at("theta"));
    for (const auto& g : j.at("generators")) cfg.generators.push_back(unitri_from_json(g));
    if (cfg.generators.empty()) throw ConfigError("generators must be nonempty");
    for (const auto& g : cfg.generators)
      if (g.dim() != cfg.d) throw ConfigError("generator dimension differs from d");
    cfg.epsilon = j.at("epsilon").get<double>();
    if (!(cfg.epsilon > 0.0)) throw ConfigError("epsilon must be > 0");

    const Json policy = j.contains("n_policy") ? j.at("n_policy") : Json("auto");
    if (policy.is_string()) {
      if (policy.get<std::string>() != "auto") throw ConfigError("n_policy must be \"auto\" or a list");
      cfg.auto_n = true;
    } else {
      cfg.auto_n = false;
      for (const auto& n : policy) {
        const auto v = n.get<std::int64_t>();
        if (v < 2) throw ConfigError("every n must be >= 2");
        cfg.n_list.push_back(v);
      }
    }
    if (j.contains("caps")) {
      const auto& c = j.at("caps");
      cfg.caps.max_basis = get_or<std::uint64_t>(c, "max_basis", cfg.caps.max_basis);
      cfg.caps.dense_cap = get_or<std::size_t>(c, "dense_cap", cfg.caps.dense_cap);
      cfg.caps.enum_cap = get_or<std::uint64_t>(c, "enum_cap", cfg.caps.enum_cap);
      cfg.caps.n_cap = get_or<std::int64_t>(c, "n_cap", cfg.caps.n_cap);
    }
    cfg.seed = get_or<std::uint64_t>(j, "seed", 0);
    cfg.norm_method = parse_method(get_or<std::string>(j, "norm_method", "power"));
    if (j.contains("probes"))
      for (const auto& pr : j.at("probes")) {
        cfg.probes.push_back(unitri_from_json(pr));
        if (cfg.probes.back().dim() != cfg.d) throw ConfigError("probe dimension differs from d");
      }
    if (j.contains("output")) {
      cfg.out_json = get_or<std::string>(j.at("output"), "json", "");
      cfg.out_csv = get_or<std::string>(j.at("output"), "csv", "");
    }
    Theta check(cfg.theta);
    return cfg;
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

CertificateConfig load_config(const std::string& path) {
  const std::string text = read_text_file(path);
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw ConfigError("cannot parse " + path + ": " + e.what());
  }
  return config_from_json(j);
}

Json to_json(const CertificateConfig& cfg) {
  Json gens = Json::array();
  for (const auto& g : cfg.generators) gens.push_back(to_json(g));
  Json probes = Json::array();
  for (const auto& p : cfg.probes) probes.push_back(to_json(p));
  Json policy = cfg.auto_n ? Json("auto") : Json(cfg.n_list);
  return {{"d", cfg.d},
          {"theta", to_json(cfg.theta)},
          {"generators", gens},
          {"epsilon", cfg.epsilon},
          {"n_policy", policy},
          {"caps",
           {{"max_basis", cfg.caps.max_basis},
            {"dense_cap", cfg.caps.dense_cap},
            {"enum_cap", cfg.caps.enum_cap},
            {"n_cap", cfg.caps.n_cap}}},
          {"seed", cfg.seed},
          {"norm_method", to_string(cfg.norm_method)},
          {"probes", probes}};
}

namespace {

std::uint64_t basis_size(std::int64_t n, int d) { return kn_spec(n, d).count(); }

std::int64_t largest_n_within_basis(int d, std::uint64_t max_basis, std::int64_t n_cap) {
  std::int64_t lo = 1, hi = n_cap;
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo + 1) / 2;
    if (mid >= 2 && basis_size(mid, d) <= max_basis)
      lo = mid;
    else
      hi = mid - 1;
  }
  return lo;
}

}  // namespace

std::vector<std::int64_t> plan_n_values(const CertificateConfig& cfg,
                                        std::optional<NSelection>* selection) {
  if (!cfg.auto_n) return cfg.n_list;
  const Theta theta(cfg.theta);
  const std::int64_t cap = largest_n_within_basis(cfg.d, cfg.caps.max_basis, cfg.caps.n_cap);
  if (cap < 2) throw CapExceeded("max_basis admits no n >= 2");
  const NSelection sel = select_n(theta, cfg.p(), cfg.epsilon, cfg.d, Int(static_cast<long>(cap)));
  if (selection) *selection = sel;
  const auto n0 = static_cast<std::int64_t>(sel.n.get_si());
  std::vector<std::int64_t> out{n0};
  if (theta.is_rational()) {
    for (std::int64_t n = 2 * n0; n <= cap; n *= 2) out.push_back(n);
  } else {
    for (const auto& c : convergents_up_to(theta, Int(static_cast<long>(cap))))
      if (c.q > sel.n) out.push_back(static_cast<std::int64_t>(c.q.get_si()));
  }
  return out;
}

NRecord certify_n(const CertificateConfig& cfg, const Theta& theta, std::int64_t n,
                  std::vector<std::string>& violations) {
  const std::string tag = "n=" + std::to_string(n) + ": ";
  if (n < 2) throw ConfigError(tag + "n must be >= 2");
  if (basis_size(n, cfg.d) > cfg.caps.max_basis)
    throw CapExceeded(tag + "|K_n| = " + std::to_string(basis_size(n, cfg.d)) +
                      " exceeds max_basis " + std::to_string(cfg.caps.max_basis));

  NRecord rec;
  rec.n = n;
  FolnerData fd;
  ProjectionBasis P;
  try {
    fd = build_folner(n, cfg.d, cfg.caps.enum_cap);
    P = build_projection(build_weights(fd, cfg.caps.enum_cap));
  } catch (const CapExceeded& e) {
    throw CapExceeded(tag + e.what());
  }
  rec.size_kn = fd.size_kn();
  rec.size_fn = fd.size_fn();
  rec.m = fd.m;
  rec.property4_verified = fd.verified && check_folner_inside_kn(fd) && check_inverse_bound(fd);
  if (!rec.property4_verified) violations.push_back(tag + "Folner containment properties fail");
  rec.support_size = P.support_size();

  const Discrepancy disc = max_discrepancy(cfg.generators, P, theta);
  rec.delta_n = disc.value;
  rec.witness_generator = disc.generator;
  rec.witness_alpha = P.points[disc.point].rep();
  rec.witness_y = P.reps[P.owner[disc.point]].rep();
  rec.analytic_bound = analytic_bound(cfg.d, Int(static_cast<long>(n)));
  rec.dist_theta_n = theta.dist_to_Z(Int(static_cast<long>(n)));
  rec.qualifies = qualifies(theta, cfg.p(), Int(static_cast<long>(n)));
  rec.bound_satisfied = rec.delta_n <= rec.analytic_bound;
  if (rec.qualifies && !rec.bound_satisfied)
    violations.push_back(tag + "Delta_n exceeds 2 pi d^2 n^-1/2");

  NormOptions opt;
  opt.method = cfg.norm_method;
  opt.dense_cap = cfg.caps.dense_cap;
  opt.seed = cfg.seed;
  for (std::size_t g = 0; g < cfg.generators.size(); ++g) {
    const UniTri& z = cfg.generators[g];
    GeneratorRecord gr;
    gr.index = g;
    gr.element = z;
    const NormResult lam = commutator_norm(TwistedOp(z, OpKind::lambda), P, theta, opt);
    const NormResult dia = commutator_norm(TwistedOp(z, OpKind::diagonal), P, theta, opt);
    const NormResult tw = commutator_norm(TwistedOp(z, OpKind::twisted), P, theta, opt);
    gr.lambda_comm_norm = lam.value;
    gr.D_comm_norm = dia.value;
    gr.twisted_comm_norm = tw.value;
    gr.norms_converged = lam.converged && dia.converged && tw.converged;
    gr.folner_ratio = folner_ratio(fd.fn_elements, project(z));
    if (gr.D_comm_norm > 2.0 * rec.delta_n + 1e-9)
      violations.push_back(tag + "||D_z P - P D_z|| exceeds 2 Delta_n for generator " +
                           std::to_string(g));
    rec.generators.push_back(std::move(gr));
  }

  auto probe = [&](std::string label, const UniTri& x) {
    const QuotientElt q(x);
    rec.probes.push_back(ProbeRecord{std::move(label), q.rep(), pointwise_defect(P, q)});
  };
  probe("identity", UniTri::identity(cfg.d));
  for (std::size_t g = 0; g < cfg.generators.size(); ++g)
    probe("generator" + std::to_string(g), cfg.generators[g]);
  probe("far", UniTri::elementary(cfg.d, 1, 2, 4 * n + fd.m + 1));
  for (std::size_t i = 0; i < cfg.probes.size(); ++i) probe("probe" + std::to_string(i), cfg.probes[i]);
  return rec;
}

CertificateReport run_certificate(const CertificateConfig& cfg) {
  CertificateReport report;
  report.config = cfg;
  auto ns = plan_n_values(cfg, &report.selection);
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  const Theta theta(cfg.theta);
  for (auto n : ns) report.records.push_back(certify_n(cfg, theta, n, report.violations));
  return report;
}

Json norms_report(const CertificateConfig& cfg, std::int64_t n) {
  const Theta theta(cfg.theta);
  const FolnerData fd = build_folner(n, cfg.d, cfg.caps.enum_cap);
  const ProjectionBasis P = build_projection(build_weights(fd, cfg.caps.enum_cap));
  const Discrepancy disc = max_discrepancy(cfg.generators, P, theta);

  Json gens = Json::array();
  for (std::size_t g = 0; g < cfg.generators.size(); ++g) {
    const UniTri& z = cfg.generators[g];
    Json entry = {{"index", g}, {"element", to_json(z)}};
    for (OpKind kind : {OpKind::lambda, OpKind::diagonal, OpKind::twisted}) {
      const TwistedOp T(z, kind);
      NormOptions opt;
      opt.seed = cfg.seed;
      opt.dense_cap = cfg.caps.dense_cap;
      opt.method = NormMethod::power;
      const NormResult pw = commutator_norm(T, P, theta, opt);
      Json k = {{"power", pw.value},
                {"power_converged", pw.converged},
                {"power_iterations", pw.iterations},
                {"dimension", pw.dimension}};
      if (pw.dimension <= cfg.caps.dense_cap) {
        opt.method = NormMethod::dense;
        const double dense = commutator_norm(T, P, theta, opt).value;
        k["dense"] = dense;
        k["power_dense_gap"] = std::abs(dense - pw.value);
      } else {
        k["dense"] = nullptr;
      }
      entry[to_string(kind)] = k;
    }
    double worst = 0.0;
    for (std::size_t y = 0; y < P.rank(); ++y)
      worst = std::max(worst, diagonal_vector_defect(z, P, y, theta));
    entry["max_diagonal_vector_defect"] = worst;
    gens.push_back(entry);
  }
  return {{"schema", kReportSchema},
          {"folner", folner_summary(fd)},
          {"support_size", P.support_size()},
          {"rank", P.rank()},
          {"delta_n", disc.value},
          {"two_delta_n", 2.0 * disc.value},
          {"analytic_bound", analytic_bound(cfg.d, Int(static_cast<long>(n)))},
          {"dist_theta_n", theta.dist_to_Z(Int(static_cast<long>(n)))},
          {"generators", gens}};
}

Json report_to_json(const CertificateReport& report) {
  Json records = Json::array();
  for (const auto& r : report.records) {
    Json gens = Json::array();
    for (const auto& g : r.generators)
      gens.push_back({{"index", g.index},
                      {"element", to_json(g.element)},
                      {"lambda_comm_norm", g.lambda_comm_norm},
                      {"D_comm_norm", g.D_comm_norm},
                      {"twisted_comm_norm", g.twisted_comm_norm},
                      {"norms_converged", g.norms_converged},
                      {"folner_ratio", g.folner_ratio}});
    Json probes = Json::array();
    for (const auto& p : r.probes)
      probes.push_back({{"label", p.label}, {"element", to_json(p.element)}, {"defect", p.defect}});
    records.push_back({{"n", r.n},
                       {"size_Kn", r.size_kn},
                       {"size_Fn", r.size_fn},
                       {"m", r.m},
                       {"property4_verified", r.property4_verified},
                       {"support_size", r.support_size},
                       {"delta_n", r.delta_n},
                       {"delta_witness",
                        {{"generator", r.witness_generator},
                         {"alpha", to_json(r.witness_alpha)},
                         {"y", to_json(r.witness_y)}}},
                       {"analytic_bound", r.analytic_bound},
                       {"dist_theta_n", r.dist_theta_n},
                       {"qualifies", r.qualifies},
                       {"bound_satisfied", r.bound_satisfied},
                       {"generators", gens},
                       {"pointwise_defects", probes}});
  }
  Json out = {{"schema", kReportSchema},
              {"version", kVersion},
              {"config", to_json(report.config)},
              {"p", int_to_json(report.config.p())},
              {"records", records},
              {"violations", report.violations}};
  if (report.selection)
    out["n_selection"] = {{"n", int_to_json(report.selection->n)},
                          {"analytic_bound_met", report.selection->analytic_bound_met},
                          {"analytic_bound", report.selection->bound}};
  return out;
}

CertificateReport report_from_json(const Json& j) {
  try {
    if (j.at("schema").get<std::string>() != kReportSchema)
      throw ConfigError("unsupported report schema " + j.at("schema").dump());
    CertificateReport report;
    report.config = config_from_json(j.at("config"));
    if (j.contains("n_selection")) {
      const auto& s = j.at("n_selection");
      report.selection = NSelection{int_from_json(s.at("n")), s.at("analytic_bound_met").get<bool>(),
                                    s.at("analytic_bound").get<double>()};
    }
    for (const auto& v : j.at("violations")) report.violations.push_back(v.get<std::string>());
    for (const auto& r : j.at("records")) {
      NRecord rec;
      rec.n = r.at("n").get<std::int64_t>();
      rec.size_kn = r.at("size_Kn").get<std::uint64_t>();
      rec.size_fn = r.at("size_Fn").get<std::uint64_t>();
      rec.m = r.at("m").get<std::int64_t>();
      rec.property4_verified = r.at("property4_verified").get<bool>();
      rec.support_size = r.at("support_size").get<std::uint64_t>();
      rec.delta_n = r.at("delta_n").get<double>();
      const auto& w = r.at("delta_witness");
      rec.witness_generator = w.at("generator").get<std::size_t>();
      rec.witness_alpha = unitri_from_json(w.at("alpha"));
      rec.witness_y = unitri_from_json(w.at("y"));
      rec.analytic_bound = r.at("analytic_bound").get<double>();
      rec.dist_theta_n = r.at("dist_theta_n").get<double>();
      rec.qualifies = r.at("qualifies").get<bool>();
      rec.bound_satisfied = r.at("bound_satisfied").get<bool>();
      for (const auto& g : r.at("generators")) {
        GeneratorRecord gr;
        gr.index = g.at("index").get<std::size_t>();
        gr.element = unitri_from_json(g.at("element"));
        gr.lambda_comm_norm = g.at("lambda_comm_norm").get<double>();
        gr.D_comm_norm = g.at("D_comm_norm").get<double>();
        gr.twisted_comm_norm = g.at("twisted_comm_norm").get<double>();
        gr.norms_converged = g.at("norms_converged").get<bool>();
        gr.folner_ratio = g.at("folner_ratio").get<double>();
        rec.generators.push_back(std::move(gr));
      }
      for (const auto& p : r.at("pointwise_defects"))
        rec.probes.push_back(ProbeRecord{p.at("label").get<std::string>(),
                                         unitri_from_json(p.at("element")),
                                         p.at("defect").get<double>()});
      report.records.push_back(std::move(rec));
    }
    return report;
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("report: ") + e.what());
  }
}

namespace {

constexpr const char* kCsvColumns[] = {
    "n",          "size_Kn",          "size_Fn",        "m",
    "property4_verified", "delta_n",  "analytic_bound", "qualifies",
    "bound_satisfied",    "generator_index", "generator", "lambda_comm_norm",
    "D_comm_norm", "twisted_comm_norm", "norms_converged", "folner_ratio"};

const char* flag(bool b) { return b ? "true" : "false"; }

}  // namespace

std::string report_to_csv(const CertificateReport& report) {
  std::ostringstream os;
  for (std::size_t i = 0; i < std::size(kCsvColumns); ++i) os << (i ? "," : "") << kCsvColumns[i];
  os << '\n';
  for (const auto& r : report.records)
    for (const auto& g : r.generators)
      os << r.n << ',' << r.size_kn << ',' << r.size_fn << ',' << r.m << ','
         << flag(r.property4_verified) << ',' << format_double(r.delta_n) << ','
         << format_double(r.analytic_bound) << ',' << flag(r.qualifies) << ','
         << flag(r.bound_satisfied) << ',' << g.index << ',' << to_string(g.element) << ','
         << format_double(g.lambda_comm_norm) << ',' << format_double(g.D_comm_norm) << ','
         << format_double(g.twisted_comm_norm) << ',' << flag(g.norms_converged) << ','
         << format_double(g.folner_ratio) << '\n';
  return os.str();
}

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream is(text);
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(s);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!s.empty() && s.back() == ',') cells.emplace_back();
    return cells;
  };
  if (!std::getline(is, line)) return table;
  table.header = split(line);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != table.header.size())
      throw ConfigError("CSV row has " + std::to_string(cells.size()) + " cells, expected " +
                        std::to_string(table.header.size()));
    table.rows.push_back(std::move(cells));
  }
  return table;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw std::runtime_error("write to " + path + " failed");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace qdcert
