#pragma once

#include <map>
#include <string>
#include <vector>

#include "normsol/blowup.hpp"
#include "normsol/spectral.hpp"
#include "normsol/tiling.hpp"
#include "normsol/two_constraint.hpp"

namespace normsol {

/// Shortest exact decimal with up to 17 significant digits.
std::string fmt17(double x);

/// "interval:a,b" | "rectangle:w0,w1" | "square:w" | "disk:r"; numbers may
/// carry a "pi" suffix ("interval:0,pi").
DomainSpec parse_domain(const std::string& s);

double parse_number(const std::string& s);

/// Flat key=value run configuration; serialization is sorted and lossless.
struct RunConfig {
  std::map<std::string, std::string> kv;

  void set(const std::string& k, const std::string& v) { kv[k] = v; }
  void set(const std::string& k, double v) { kv[k] = fmt17(v); }
  void set(const std::string& k, int v) { kv[k] = std::to_string(v); }

  std::string serialize() const;
  static RunConfig parse(const std::string& text);
  std::string hash() const;  // FNV-1a of the serialization, hex
};

void write_eig_csv(const std::string& path, const std::vector<EigenPair>& pairs,
                   const std::string& config_hash);

struct BranchMeta {
  DomainSpec domain;
  int resolution = 0;
  double p = 0.0;
  double lambda1 = 0.0;
  std::string config_hash;
};

void write_branch_csv(const std::string& path, const Branch& branch,
                      const BranchMeta& meta);

struct BranchFile {
  BranchMeta meta;
  std::vector<RatioRow> rows;        // alpha, lambda, mu, gn ratios filled
  std::vector<double> f, rho, residual;
  std::vector<int> morse;
};
BranchFile read_branch_csv(const std::string& path);

void write_ladder_csv(const std::string& path, const LadderResult& ladder,
                      const std::string& config_hash);

}  // namespace normsol
