// Writes a synthetic CMU-layout BVH corpus and its roles.json.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sketchmo/synthetic.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Generate a synthetic BVH corpus"};
    std::string out;
    std::size_t count = 55;
    std::uint64_t seed = 2023;
    app.add_option("--out", out, "Output directory")->required();
    app.add_option("--count", count, "Number of clips");
    app.add_option("--seed", seed);
    CLI11_PARSE(app, argc, argv);

    sketchmo::synthetic::write_corpus(out, count, seed);
    std::cout << "wrote " << count << " clips and roles.json to " << out << '\n';
    return 0;
}
