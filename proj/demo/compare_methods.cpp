// Runs every method on the boundary-value system at a chosen grid size and
// prints iterations, estimated order and operation counts side by side.
//
//   compare_methods [n_subintervals] [start_value]

#include <cstdio>
#include <cstdlib>

#include "multipoint/multipoint.hpp"

using namespace multipoint;

int main(int argc, char** argv) {
  const int n = argc > 1 ? std::atoi(argv[1]) : 15;
  const double start = argc > 2 ? std::atof(argv[2]) : 0.5;

  const auto p = bvp_problem(BvpSpec(n));
  const Vector x0 = Vector::filled(p.dim, start);

  std::printf("%-10s %-16s %5s %8s %10s %10s %4s\n", "method", "status", "iters", "coc", "products", "quotients",
              "lu");
  for (auto m : {MethodId::newton, MethodId::pg6, MethodId::cordero5, MethodId::cordero6}) {
    const auto t = solve(p, m, x0);
    double coc = 0.0;
    try {
      coc = coc_estimate(t).p_max;
    } catch (const InsufficientData&) {
    }
    std::printf("%-10s %-16s %5d %8.4f %10llu %10llu %4llu\n", std::string(to_string(m)).c_str(),
                std::string(to_string(t.status)).c_str(), t.iterations(), coc,
                static_cast<unsigned long long>(t.ops.products()), static_cast<unsigned long long>(t.ops.quotients()),
                static_cast<unsigned long long>(t.ops.lu_factorizations()));
  }
  return 0;
}
