#include <iostream>

#include "phasebell/cli/run.hpp"

int main(int argc, char** argv) {
  using namespace phasebell::cli;
  try {
    const RunConfig cfg = parse_args(argc, argv);
    return run(cfg, std::cerr);
  } catch (const HelpRequested& h) {
    std::cout << h.what();
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "phasebell: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "phasebell: " << e.what() << '\n';
    return kExitIo;
  } catch (const phasebell::DomainError& e) {
    std::cerr << "phasebell: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "phasebell: " << e.what() << '\n';
    return 1;
  }
}
