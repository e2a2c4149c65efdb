// Generates data from a random stable TPDS, checks the four informativity
// properties with both methods, and identifies the system.

#include <iostream>

#include "tpds/tpds.hpp"

int main() {
  tpds::GenSpec spec;
  spec.n = 2;
  spec.h = 2;
  spec.l = 10;
  spec.r = 8;
  spec.seed = 42;
  spec.mode = tpds::GenMode::simulate;
  spec.radius = 0.9;
  const auto gen = tpds::generate(spec);

  for (auto kind : {tpds::TestKind::sysid, tpds::TestKind::stability, tpds::TestKind::controllability,
                    tpds::TestKind::stabilizability}) {
    for (auto method : {tpds::Method::fourier, tpds::Method::dense}) {
      const auto rep = tpds::check(kind, gen.data, method);
      std::cout << tpds::to_string(kind) << " / " << tpds::to_string(method) << ": "
                << (rep.verdict ? "informative" : "not informative") << '\n';
    }
  }

  const auto id = tpds::identify(gen.data.x0, gen.data.x1);
  std::cout << "identification error: " << tpds::max_abs_diff(id.a, *gen.a) << " (unique: " << id.unique << ")\n";
}
