// Command-line front end: reads a flat key-value config file, dispatches the
// command it names, and writes JSON/CSV artifacts.
//
// Exit codes: 0 success, 1 config error, 2 domain or verification failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "splitgeo/splitgeo.hpp"

int main(int argc, char** argv) {
    CLI::App app{"splitgeo: geodesics and first integrals of split Liouville metrics"};
    std::string config_path;
    std::string output_dir;
    app.add_option("config", config_path, "path to a key-value config file")->required();
    app.add_option("--output-dir", output_dir,
                   "directory for reports and CSV artifacts (overrides "
                   "SPLITGEO_OUTPUT_DIR; default '.')");
    app.set_version_flag("--version", std::string(splitgeo::kVersion));
    CLI11_PARSE(app, argc, argv);

    if (output_dir.empty()) {
        if (const char* env = std::getenv("SPLITGEO_OUTPUT_DIR")) output_dir = env;
    }
    if (output_dir.empty()) output_dir = ".";

    std::ifstream is(config_path);
    if (!is) {
        std::cerr << "config error: cannot open '" << config_path << "'\n";
        return 1;
    }
    std::stringstream buffer;
    buffer << is.rdbuf();

    splitgeo::RunConfig rc;
    try {
        rc = splitgeo::parse_config(buffer.str());
    } catch (const splitgeo::ParseError& e) {
        std::cerr << "config parse error: " << e.what() << '\n';
        return 1;
    } catch (const splitgeo::ValidationError& e) {
        std::cerr << "config validation error: " << e.what() << '\n';
        return 1;
    }

    try {
        return splitgeo::run(rc, output_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
