#include <iostream>

#include "ppsde/experiment.hpp"

int main(int argc, char** argv) {
    try {
        const ppsde::ExperimentSpec spec = ppsde::parse_args(argc, argv);
        return ppsde::execute(spec, std::cerr);
    } catch (const ppsde::HelpRequested& help) {
        std::cout << help.what();
        return 0;
    } catch (const ppsde::UsageError& e) {
        std::cerr << "error: " << e.what() << "\nrun 'ppsde run --help' for usage\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
