// Command-line front end: run a plan file, list the experiment registry, or
// render a stored configuration as a PGM snapshot.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "perc/geometry.hpp"
#include "perc/plan.hpp"

int main(int argc, char** argv) {
    CLI::App app{"finite-window percolation experiments for attractive planar spin models"};
    app.require_subcommand(1);

    std::string plan_path;
    auto* run = app.add_subcommand("run", "execute a plan file and write results");
    run->add_option("plan", plan_path, "plan file")->required();

    auto* list = app.add_subcommand("list", "list experiment ids");

    std::string config_path;
    auto* snapshot = app.add_subcommand("snapshot", "render a grid-text configuration to PGM");
    snapshot->add_option("config", config_path, "configuration file (grid text)")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*list) {
            std::cout << perc::list_registry();
            return 0;
        }
        if (*run) {
            perc::RunPlan plan = perc::parse_plan(plan_path);
            return perc::execute(plan);
        }
        if (*snapshot) {
            std::ifstream in(config_path);
            if (!in) throw perc::Error("cannot open " + config_path);
            std::string header;
            std::getline(in, header);
            // header: lattice=<name> L=<radius> bc=<label>
            std::string lattice = "square";
            std::int64_t L = 8;
            for (std::istringstream hs(header); hs;) {
                std::string tok;
                if (!(hs >> tok)) break;
                if (tok.rfind("lattice=", 0) == 0) lattice = tok.substr(8);
                if (tok.rfind("L=", 0) == 0) L = std::stoll(tok.substr(2));
            }
            auto g = perc::make_lattice(perc::LatticeSpec::preset(lattice), L + 4);
            perc::Window w = perc::Window::rect(g, perc::Rect::box(L));
            perc::Configuration c(g, w, -1);
            std::stringstream rest;
            rest << header << "\n" << in.rdbuf();
            perc::from_grid_text(c, rest.str());
            auto oi = perc::open_interface(c);
            std::vector<perc::Point> overlay;
            if (oi.contour) overlay = perc::contour_dual_points(g, *oi.contour);
            std::string out_path = config_path + ".pgm";
            std::ofstream out(out_path, std::ios::binary);
            out << perc::to_pgm(c, overlay);
            std::cout << "wrote " << out_path << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
