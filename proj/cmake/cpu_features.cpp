#include <cstdio>

int main() {
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx512f")) {
    std::puts("SkylakeX");
  } else if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
    std::puts("Haswell");
  } else if (__builtin_cpu_supports("avx")) {
    std::puts("Sandybridge");
  }
  return 0;
}
