#include <iostream>
#include <string>
#include <vector>

#include "hyplab/experiment.hpp"

namespace {

void print_usage(std::ostream& os) {
    os << "usage: hyplab_cli <command> [key=value ...] [--json] [--csv] [--timing]\n"
          "\n"
          "commands:\n"
          "  upper-bound   n= p= s= tolerance=            collar Rayleigh quotient vs F(s)\n"
          "  ball-eig      n= p= kappa= radius= mesh=     first p-eigenvalue of a geodesic ball\n"
          "  lee           n= base= samples= seed=        eigenfunction residuals at random points\n"
          "  submanifold   kind= dim= ambient= t= check=  catalog checks: angles | sectional | 2ff | fu-tao\n"
          "  sweep         <config-file>                  Cartesian grid from key=value[,value...] lines\n"
          "\n"
          "exit codes: 0 all rows pass, 1 usage error, 2 tolerance failure\n";
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    if (args.empty() || args[0] == "--help" || args[0] == "-h") {
        print_usage(args.empty() ? std::cerr : std::cout);
        return args.empty() ? 1 : 0;
    }
    try {
        const hyplab::ExperimentConfig config = hyplab::parse_cli(args);
        return hyplab::run_experiment(config, std::cout, std::cerr);
    } catch (const hyplab::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        print_usage(std::cerr);
        return 1;
    }
}
