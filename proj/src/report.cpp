#include "normsol/report.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace normsol {

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string RunConfig::serialize() const {
  std::string out;
  for (const auto& [k, v] : kv) {
    out += k;
    out += '=';
    out += v;
    out += '\n';
  }
  return out;
}

RunConfig RunConfig::parse(const std::string& text) {
  RunConfig cfg;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw config_error("RunConfig: malformed line: " + line);
    cfg.kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return cfg;
}

std::string RunConfig::hash() const {
  const std::string s = serialize();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_eig_csv(const std::string& path, const std::vector<EigenPair>& pairs,
                   const std::string& config_hash) {
  std::ofstream os(path);
  if (!os) throw config_error("write_eig_csv: cannot open " + path);
  os << "# config_hash=" << config_hash << "\n";
  os << "k,lambda,residual\n";
  for (const EigenPair& ep : pairs)
    os << ep.k << "," << fmt17(ep.lambda) << "," << fmt17(ep.residual) << "\n";
}

void write_branch_csv(const std::string& path, const Branch& branch,
                      const BranchMeta& meta) {
  std::ofstream os(path);
  if (!os) throw config_error("write_branch_csv: cannot open " + path);
  os << "# config_hash=" << meta.config_hash << "\n";
  os << "# domain=" << meta.domain.str() << "\n";
  os << "# n=" << meta.resolution << "\n";
  os << "# p=" << fmt17(meta.p) << "\n";
  os << "# lambda1=" << fmt17(meta.lambda1) << "\n";
  os << "alpha,lambda,mu,rho,f,morse,residual\n";
  for (const CriticalPoint& cp : branch.points) {
    os << fmt17(cp.alpha) << "," << fmt17(cp.lambda) << "," << fmt17(cp.mu) << ","
       << fmt17(cp.rho) << "," << fmt17(cp.f) << "," << cp.morse << ","
       << fmt17(cp.residual) << "\n";
  }
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

double parse_number(const std::string& s) {
  try {
    if (s == "pi") return M_PI;
    if (s.size() > 2 && s.substr(s.size() - 2) == "pi")
      return M_PI * std::stod(s.substr(0, s.size() - 2));
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw config_error("bad number: " + s);
    return v;
  } catch (const config_error&) {
    throw;
  } catch (const std::exception&) {
    throw config_error("bad number: " + s);
  }
}

DomainSpec parse_domain(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw config_error("bad domain string: " + s);
  const std::string kind = s.substr(0, colon);
  const auto parts = split(s.substr(colon + 1), ',');
  if (kind == "interval" && parts.size() == 2)
    return DomainSpec::interval(parse_number(parts[0]), parse_number(parts[1]));
  if (kind == "rectangle" && parts.size() == 2)
    return DomainSpec::rectangle(parse_number(parts[0]), parse_number(parts[1]));
  if (kind == "square" && parts.size() == 1) {
    const double w = parse_number(parts[0]);
    return DomainSpec::rectangle(w, w);
  }
  if (kind == "disk" && parts.size() == 1) return DomainSpec::disk(parse_number(parts[0]));
  throw config_error("bad domain string: " + s);
}

BranchFile read_branch_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw config_error("read_branch_csv: cannot open " + path);
  BranchFile bf;
  std::string line;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = line.substr(2, eq - 2);
      const std::string val = line.substr(eq + 1);
      if (key == "config_hash") bf.meta.config_hash = val;
      if (key == "domain") bf.meta.domain = parse_domain(val);
      if (key == "n") bf.meta.resolution = std::stoi(val);
      if (key == "p") bf.meta.p = std::stod(val);
      if (key == "lambda1") bf.meta.lambda1 = std::stod(val);
      continue;
    }
    if (!header_seen) {
      header_seen = true;  // column header
      continue;
    }
    const auto parts = split(line, ',');
    if (parts.size() != 7) throw config_error("read_branch_csv: malformed row: " + line);
    RatioRow r;
    r.alpha = std::stod(parts[0]);
    r.lambda = std::stod(parts[1]);
    r.mu = std::stod(parts[2]);
    r.alpha_over_lambda = r.alpha / r.lambda;
    const double f = std::stod(parts[4]);
    const int N = bf.meta.domain.dim();
    r.gn_ratio = f / std::pow(r.alpha, N * (bf.meta.p - 1.0) / 4.0);
    bf.rows.push_back(r);
    bf.rho.push_back(std::stod(parts[3]));
    bf.f.push_back(f);
    bf.morse.push_back(std::stoi(parts[5]));
    bf.residual.push_back(std::stod(parts[6]));
  }
  if (bf.rows.empty()) throw config_error("read_branch_csv: no data rows in " + path);
  return bf;
}

void write_ladder_csv(const std::string& path, const LadderResult& ladder,
                      const std::string& config_hash) {
  std::ofstream os(path);
  if (!os) throw config_error("write_ladder_csv: cannot open " + path);
  os << "# config_hash=" << config_hash << "\n";
  os << "# exponent=" << fmt17(ladder.exponent) << "\n";
  os << "# verdict=" << ladder.verdict << "\n";
  os << "k,h_k,lambda1_bound,rho_lower,cumulative_max\n";
  for (const LadderRow& r : ladder.rows)
    os << r.k << "," << r.copies << "," << fmt17(r.lambda1_bound) << ","
       << fmt17(r.rho_lower) << "," << fmt17(r.cumulative_max) << "\n";
}

}  // namespace normsol
