#include "depbounds/serialize.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "depbounds/errors.hpp"

namespace depbounds {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw DomainError("unknown format '" + name + "' (expected csv | json)");
}

std::string estimate_csv(const Estimate& e, double beta, int d) {
  std::ostringstream os;
  os << "value,se,method,effort,beta,d\n";
  os << format_double(e.value) << ',' << format_double(e.se) << ','
     << method_name(e.method) << ',' << e.effort << ','
     << format_double(beta) << ',' << d << '\n';
  return os.str();
}

namespace {

nlohmann::ordered_json estimate_obj(const Estimate& e, double beta, int d) {
  nlohmann::ordered_json j;
  j["value"] = e.value;
  j["se"] = e.se;
  j["method"] = method_name(e.method);
  j["effort"] = e.effort;
  j["beta"] = beta;
  j["d"] = d;
  if (e.mc_fallback) j["mc_fallback"] = true;
  return j;
}

}  // namespace

std::string estimate_json(const Estimate& e, double beta, int d) {
  return estimate_obj(e, beta, d).dump(2) + "\n";
}

std::string bounds_report_csv(const BoundsReport& rep) {
  std::ostringstream os;
  os << "side,name,value,sharp,derivation\n";
  for (const BoundRow& r : rep.lower) {
    os << "lower," << r.name << ',' << format_double(r.value) << ','
       << (r.sharp ? "true" : "false") << ',' << r.derivation << '\n';
  }
  for (const BoundRow& r : rep.upper) {
    os << "upper," << r.name << ',' << format_double(r.value) << ','
       << (r.sharp ? "true" : "false") << ',' << r.derivation << '\n';
  }
  if (rep.estimate) {
    os << "estimate,attached," << format_double(rep.estimate->value) << ",,"
       << method_name(rep.estimate->method) << '\n';
  }
  return os.str();
}

std::string bounds_report_json(const BoundsReport& rep) {
  nlohmann::ordered_json j;
  j["d"] = rep.d;
  j["beta"] = rep.beta;
  j["marginals"] = rep.marginal_desc;
  auto rows = [](const std::vector<BoundRow>& rs) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const BoundRow& r : rs) {
      arr.push_back({{"name", r.name},
                     {"value", r.value},
                     {"sharp", r.sharp},
                     {"derivation", r.derivation}});
    }
    return arr;
  };
  j["lower"] = rows(rep.lower);
  j["upper"] = rows(rep.upper);
  if (rep.estimate) {
    j["estimate"] = estimate_obj(*rep.estimate, rep.beta, rep.d);
    j["bracketed"] = rep.estimate_bracketed();
  }
  return j.dump(2) + "\n";
}

std::string trace_csv(const SearchResult& res) {
  std::ostringstream os;
  os << "restart,iterations,final_value\n";
  for (const RestartTrace& t : res.trace) {
    os << t.restart << ',' << t.iterations << ',' << format_double(t.final_value)
       << '\n';
  }
  return os.str();
}

std::string points_csv(const std::vector<std::vector<double>>& pts) {
  std::ostringstream os;
  if (!pts.empty()) {
    const char* names[3] = {"x", "y", "z"};
    for (std::size_t k = 0; k < pts.front().size(); ++k) {
      if (k) os << ',';
      os << (k < 3 ? names[k] : ("c" + std::to_string(k)).c_str());
    }
    os << '\n';
  }
  for (const auto& p : pts) {
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (k) os << ',';
      os << format_double(p[k]);
    }
    os << '\n';
  }
  return os.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DomainError("cannot write to " + tmp);
    out << content;
    if (!out.good()) throw DomainError("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace depbounds
