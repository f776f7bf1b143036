#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gasket/lab.hpp"

int main(int argc, char** argv) {
    CLI::App app{
        "gasket_lab: alpha-stable processes on the Sierpinski gasket among "
        "Poissonian obstacles"};
    std::string command;
    std::vector<std::string> tokens;
    app.add_option("command", command,
                   "spectrum | ids | sausage | survival | enlarge-check | fit | selftest | replay")
        ->required();
    app.add_option("params", tokens,
                   "key=value parameters; config=FILE loads a manifest first, out=DIR sets the "
                   "output directory");
    CLI11_PARSE(app, argc, argv);

    try {
        gasket::Config cfg;
        if (command == "replay") {
            if (tokens.empty()) throw gasket::DomainError("replay needs a manifest path");
            cfg = gasket::Config::parse_file(tokens.front());
            std::vector<std::string> rest(tokens.begin() + 1, tokens.end());
            gasket::Config overrides = gasket::Config::parse_tokens(rest);
            for (const auto& [k, v] : overrides.items()) cfg.set(k, v);
            command = cfg.require("command");
        } else {
            // config=FILE first, explicit tokens override.
            for (const auto& t : tokens)
                if (t.rfind("config=", 0) == 0)
                    cfg = gasket::Config::parse_file(t.substr(7));
            gasket::Config overrides = gasket::Config::parse_tokens(tokens);
            for (const auto& [k, v] : overrides.items())
                if (k != "config") cfg.set(k, v);
        }
        std::string out_dir = cfg.get("out", "run_" + command);
        return gasket::run_command(command, cfg, out_dir);
    } catch (const std::exception& e) {
        fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
