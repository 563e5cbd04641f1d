#include "lipschitz/study_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "lipschitz/errors.hpp"

namespace lipschitz {

using nlohmann::json;

namespace {

constexpr int kThresholdsVersion = 1;
constexpr int kResultFormat = 1;

// Shortest round-trip decimal form.
std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

// RFC 4180 quoting for fields holding commas or quotes (event names).
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

json jnum(double x) { return std::isfinite(x) ? json(x) : json(num(x)); }

double from_jnum(const json& j) {
  if (j.is_number()) return j.get<double>();
  std::string s = j.get<std::string>();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return std::numeric_limits<double>::quiet_NaN();
}

template <class T>
T need(const json& j, const char* key) {
  if (!j.contains(key)) throw InvalidArgument(std::string("missing key ") + key);
  return j.at(key).get<T>();
}

std::string order_name(SiteOrder o) { return o == SiteOrder::fixed ? "fixed" : "shuffled"; }

SiteOrder parse_order(const std::string& s) {
  if (s == "fixed") return SiteOrder::fixed;
  if (s == "shuffled") return SiteOrder::shuffled;
  throw InvalidArgument("unknown site order " + s);
}

Regime parse_regime(const std::string& s) {
  for (Regime r : {Regime::delocalized, Regime::localized, Regime::exploratory})
    if (to_string(r) == s) return r;
  throw InvalidArgument("unknown regime " + s);
}

}  // namespace

std::string default_thresholds_path() {
  if (const char* env = std::getenv("LIPSCHITZ_VERDICTS"); env && *env) return env;
  return LIPSCHITZ_DEFAULT_VERDICTS;
}

Thresholds parse_thresholds(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("verdict file is not valid JSON: ") + e.what());
  }
  try {
    Thresholds t;
    t.version = need<int>(j, "version");
    if (t.version != kThresholdsVersion)
      throw InvalidArgument("verdict file version " + std::to_string(t.version) + " is not supported");
    const json& v = j.at("variance_scan");
    t.deloc_min_slope_se = need<double>(v.at("delocalized"), "min_slope_se");
    t.deloc_min_r2 = need<double>(v.at("delocalized"), "min_r2");
    t.loc_max_variance_rise = need<double>(v.at("localized"), "max_variance_rise");
    t.tail_min_decay_se = need<double>(j.at("tail_scan").at("localized"), "min_decay_se");
    t.loop_max_violations = need<long long>(j.at("loop_scan"), "max_violations");
    t.loop_min_a = need<double>(j.at("loop_scan").at("delocalized"), "min_a");
    t.torus_max_se = need<double>(j.at("torus_identity"), "max_se");
    return t;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed verdict file: ") + e.what());
  }
}

Thresholds load_thresholds(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open verdict file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_thresholds(ss.str());
}

std::string csv_header() { return "study,kind,c,n,estimate,se,nsamples,seed"; }

void write_csv(std::ostream& os, const StudyResult& res, bool header) {
  if (header) os << csv_header() << '\n';
  const std::string kind = res.config.kind.name();
  const std::string c = res.config.c.to_string();
  for (const Row& r : res.rows) {
    os << csv_field(r.study) << ',' << kind << ',' << c << ',' << r.n << ',' << (r.censored ? "<" : "")
       << num(r.estimate) << ',' << num(r.se) << ',' << r.nsamples << ',' << res.config.sampler.seed << '\n';
  }
}

void write_json(std::ostream& os, const StudyResult& res, bool with_timing) {
  const StudyConfig& c = res.config;
  json j;
  j["format"] = kResultFormat;
  j["study"] = res.study;
  j["regime"] = to_string(res.regime);
  j["parameters"] = {
      {"kind", c.kind.name()},
      {"c", c.c.to_string()},
      {"sizes", c.sizes},
      {"box", c.box},
      {"m_values", c.m_values},
      {"ratio", c.ratio},
      {"torus_n", c.torus_n},
      {"region", c.region},
      {"chains", c.chains},
      {"burnin_n2", c.burnin_n2},
      {"max_vertices", c.max_vertices},
      {"sampler",
       {{"seed", c.sampler.seed},
        {"sweeps", c.sampler.sweeps},
        {"burnin", c.sampler.burnin},
        {"thin", c.sampler.thin},
        {"cluster_period", c.sampler.cluster_period},
        {"order", order_name(c.sampler.order)},
        {"batches", c.sampler.batches},
        {"sample_cap", c.sampler.sample_cap}}},
  };
  json rows = json::array();
  for (const Row& r : res.rows)
    rows.push_back({{"study", r.study},
                    {"n", r.n},
                    {"estimate", jnum(r.estimate)},
                    {"se", jnum(r.se)},
                    {"nsamples", r.nsamples},
                    {"censored", r.censored}});
  j["rows"] = rows;
  if (res.fit) {
    const LinearFit& f = *res.fit;
    j["fit"] = {{"points", f.n},
                {"slope", jnum(f.slope)},
                {"intercept", jnum(f.intercept)},
                {"slope_se", jnum(f.slope_se)},
                {"slope_se_residual", jnum(f.slope_se_residual)},
                {"slope_se_measurement", jnum(f.slope_se_measurement)},
                {"r2", jnum(f.r2)}};
    if (res.study == "tail-scan") j["fit"]["decay_rate"] = jnum(-f.slope);
  } else {
    j["fit"] = nullptr;
  }
  json verdicts = json::array();
  for (const Verdict& v : res.verdicts)
    verdicts.push_back({{"name", v.name},
                        {"pass", v.pass},
                        {"value", jnum(v.value)},
                        {"threshold", jnum(v.threshold)},
                        {"detail", v.detail}});
  j["verdicts"] = verdicts;
  j["violations"] = res.violations;
  j["ok"] = res.ok();
  if (with_timing) j["wall_seconds"] = res.wall_seconds;
  os << j.dump(2) << '\n';
}

StudyResult read_json(std::istream& is) {
  json j;
  try {
    j = json::parse(is);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("study file is not valid JSON: ") + e.what());
  }
  try {
    if (need<int>(j, "format") != kResultFormat) throw InvalidArgument("unsupported study file format");
    StudyResult res;
    res.study = need<std::string>(j, "study");
    res.regime = parse_regime(need<std::string>(j, "regime"));
    const json& p = j.at("parameters");
    StudyConfig& c = res.config;
    c.kind = LatticeKind::parse(need<std::string>(p, "kind"));
    c.c = EdgeWeight::parse(need<std::string>(p, "c"));
    c.sizes = need<std::vector<int>>(p, "sizes");
    c.box = need<int>(p, "box");
    c.m_values = need<std::vector<int>>(p, "m_values");
    c.ratio = need<int>(p, "ratio");
    c.torus_n = need<int>(p, "torus_n");
    c.region = p.value("region", std::string());
    c.chains = need<int>(p, "chains");
    c.burnin_n2 = need<double>(p, "burnin_n2");
    c.max_vertices = need<long long>(p, "max_vertices");
    const json& s = p.at("sampler");
    c.sampler.seed = need<std::uint64_t>(s, "seed");
    c.sampler.sweeps = need<long long>(s, "sweeps");
    c.sampler.burnin = need<long long>(s, "burnin");
    c.sampler.thin = need<long long>(s, "thin");
    c.sampler.cluster_period = need<long long>(s, "cluster_period");
    c.sampler.order = parse_order(need<std::string>(s, "order"));
    c.sampler.batches = need<int>(s, "batches");
    c.sampler.sample_cap = need<long long>(s, "sample_cap");
    for (const json& r : j.at("rows")) {
      Row row;
      row.study = need<std::string>(r, "study");
      row.n = need<int>(r, "n");
      row.estimate = from_jnum(r.at("estimate"));
      row.se = from_jnum(r.at("se"));
      row.nsamples = need<long long>(r, "nsamples");
      row.censored = need<bool>(r, "censored");
      res.rows.push_back(row);
    }
    if (!j.at("fit").is_null()) {
      const json& f = j.at("fit");
      LinearFit fit;
      fit.n = need<int>(f, "points");
      fit.slope = from_jnum(f.at("slope"));
      fit.intercept = from_jnum(f.at("intercept"));
      fit.slope_se = from_jnum(f.at("slope_se"));
      fit.slope_se_residual = from_jnum(f.at("slope_se_residual"));
      fit.slope_se_measurement = from_jnum(f.at("slope_se_measurement"));
      fit.r2 = from_jnum(f.at("r2"));
      res.fit = fit;
    }
    for (const json& v : j.at("verdicts"))
      res.verdicts.push_back({need<std::string>(v, "name"), need<bool>(v, "pass"), from_jnum(v.at("value")),
                              from_jnum(v.at("threshold")), need<std::string>(v, "detail")});
    res.violations = need<long long>(j, "violations");
    if (j.contains("wall_seconds")) res.wall_seconds = j.at("wall_seconds").get<double>();
    return res;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed study file: ") + e.what());
  }
}

}  // namespace lipschitz
