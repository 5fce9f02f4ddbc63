#include <cstdio>

int helper_value();

int main() {
  std::printf("%d\n", helper_value());
  return 0;
}
