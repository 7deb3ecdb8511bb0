// Generated by tests/oracles/gen_bound_goldens.py (mpmath, 60 digits).
// Frozen oracle values; do not edit by hand.
#pragma once

namespace bound_goldens {

struct GoldenSet {
  const char* name;
  double L, R, Q, f, beta, eta, eps;
  double k_cp, s_cg, s_ecq, k_cq, k_t4, r, k_c2;
  double lift, cp, cg, ecq, cq, t4, c2;
};

inline constexpr GoldenSet kSets[] = {
    {"A",
     10000.0, 1000.0, 100000.0, 0.05, 0.9, 0.6666666666666666, 0.5,
     500.0, 6400.0, 1600.0, 6400.0, 500.0, 1000.0, 300.0,
     1.0041898813914649e+18, 1.0041898813954229e+18, 1.0041901995965179e+18, 1.0041900405934305e+18, 1.0041901995965179e+18, 53566.109909398201, 792633.57047801720},
    {"B",
     20000.0, 2000.0, 100000.0, 0.1, 0.8, 0.75, 0.4,
     800.0, 4000.0, 1000.0, 4000.0, 800.0, 2000.0, 512.0,
     1.6019734797395744e+19, 1.6019734797430900e+19, 1.6019735590228047e+19, 1.6019735194208312e+19, 1.6019735590228047e+19, 475787.49213244385, 5295280.9146658665},
    {"C",
     50000.0, 5000.0, 1000000.0, 0.05, 0.8, 0.8, 0.25,
     2000.0, 12000.0, 3000.0, 12000.0, 2000.0, 5000.0, 1500.0,
     6.2653535656605199e+21, 6.2653535656616841e+21, 6.2653535806155873e+21, 6.2653535731405461e+21, 6.2653535806155873e+21, 15756788.358759141, 129771890.89445672},
};

}  // namespace bound_goldens

