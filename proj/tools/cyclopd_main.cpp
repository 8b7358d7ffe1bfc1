#include <cstdio>
int main() { std::puts("cyclopd: placeholder"); return 0; }
