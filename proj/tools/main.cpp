#include <cstdio>

int main() {
    std::puts("raresynth CLI: not wired up yet");
    return 2;
}
