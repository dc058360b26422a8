#include <cstdio>

int main() {
    std::puts("rcm: placeholder");
    return 0;
}
