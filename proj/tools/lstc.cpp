#include "lstc/cli.hpp"

int main(int argc, char** argv) {
  return lstc::cli::dispatch(std::vector<std::string>(argv + 1, argv + argc));
}
