#include <iostream>

int main(int argc, char** argv) {
  (void)argc;
  (void)argv;
  std::cerr << "natlog: not yet wired up\n";
  return 1;
}
