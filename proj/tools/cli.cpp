#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "meshcoop/allocation.hpp"
#include "meshcoop/barycentric.hpp"
#include "meshcoop/coalition.hpp"
#include "meshcoop/error.hpp"
#include "meshcoop/network_io.hpp"
#include "meshcoop/partition.hpp"
#include "meshcoop/report.hpp"

namespace meshcoop::cli {

namespace {

struct Common {
  std::string network_path;
  std::string mode = "elastic";
  std::string output;
  bool csv = false;
  unsigned threads = 1;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("network", c.network_path, "Network JSON file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--mode", c.mode, "Demand model")->check(CLI::IsMember({"elastic", "strict"}));
  cmd->add_flag("--csv", c.csv, "Comma-separated output");
  cmd->add_option("-o,--output", c.output, "Write output to FILE instead of stdout");
  cmd->add_option("--threads", c.threads, "Worker threads for coalition enumeration (0 = all cores)");
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw DomainError("not a number: '" + item + "'");
    }
  }
  return out;
}

Coalition parse_coalition(const std::string& text, int providers) {
  Coalition c;
  for (double v : parse_list(text)) {
    const int m = static_cast<int>(v);
    if (m != v || m < 1 || m > providers) {
      throw DomainError("coalition member out of range 1.." + std::to_string(providers) + ": " + std::to_string(v));
    }
    c = c.with(m);
  }
  if (c.empty()) throw DomainError("empty --coalition");
  return c;
}

// Routes output to the -o file when given.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw Error("cannot write " + path);
      os_ = &file_;
    }
  }
  std::ostream& get() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

Network load(const Common& c) { return build_network(read_network(c.network_path)); }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coalition values and payoff allocation for multi-provider wireless mesh networks", "meshcoop"};
  app.require_subcommand(1);

  // gen
  struct {
    int sps = 3, nodes = 20, sessions = 3;
    std::uint64_t seed = 1;
    std::string output;
    Params params;
  } gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random network");
  gen_cmd->add_option("--sps", gen.sps, "Number of providers")->check(CLI::Range(1, 31));
  gen_cmd->add_option("--nodes", gen.nodes, "Nodes per provider")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--sessions", gen.sessions, "Sessions per provider")->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--seed", gen.seed, "Random seed");
  gen_cmd->add_option("-o,--output", gen.output, "Write to FILE instead of stdout");
  gen_cmd->add_option("--price", gen.params.price_per_rate, "Payoff per Kbps served");
  gen_cmd->add_option("--cost", gen.params.cost_per_rate, "Cost per Kbps per transmitting node");
  gen_cmd->add_option("--range", gen.params.tx_range_m, "Transmission range (m)");
  gen_cmd->add_option("--area", gen.params.area_side_m, "Side of the square area (m)");
  gen_cmd->add_option("--bandwidth", gen.params.bandwidth_hz, "Band width per link (Hz)");
  gen_cmd->add_option("--tx-power", gen.params.tx_power_w, "Transmit power (W)");
  gen_cmd->add_option("--noise", gen.params.noise_power_w, "Noise power (W)");
  gen_cmd->add_option("--rate-min", gen.params.rate_req_min_kbps, "Minimum rate requirement (Kbps)");
  gen_cmd->add_option("--rate-max", gen.params.rate_req_max_kbps, "Maximum rate requirement (Kbps)");

  Common value_opts, alloc_opts, core_opts, struct_opts, plot_opts, breakdown_opts;
  std::string value_coalition, breakdown_coalition, method = "shapley", x_text;

  auto* value_cmd = app.add_subcommand("value", "Characteristic function values");
  add_common(value_cmd, value_opts);
  value_cmd->add_option("--coalition", value_coalition, "Comma-separated providers, e.g. 1,2");

  auto* alloc_cmd = app.add_subcommand("allocate", "Allocate the grand coalition payoff");
  add_common(alloc_cmd, alloc_opts);
  alloc_cmd->add_option("--method", method, "Allocation rule")->check(CLI::IsMember({"dual", "shapley"}));

  auto* core_cmd = app.add_subcommand("core", "Check an allocation against the core");
  add_common(core_cmd, core_opts);
  core_cmd->add_option("--x", x_text, "Comma-separated payoffs, one per provider")->required();

  auto* struct_cmd = app.add_subcommand("structures", "Payoff matrix over all coalition structures");
  add_common(struct_cmd, struct_opts);

  auto* plot_cmd = app.add_subcommand("plot", "Barycentric SVG of the core with both allocations");
  add_common(plot_cmd, plot_opts);
  plot_cmd->get_option("--output")->required();

  auto* breakdown_cmd = app.add_subcommand("breakdown", "Revenue and routing cost per provider");
  add_common(breakdown_cmd, breakdown_opts);
  breakdown_cmd->add_option("--coalition", breakdown_coalition, "Coalition whose routing to account (default: all)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (gen_cmd->parsed()) {
      const NetworkSpec spec = generate_random(gen.sps, gen.nodes, gen.sessions, gen.params, gen.seed);
      if (gen.output.empty()) {
        out << write_network(spec);
      } else {
        write_network(spec, gen.output);
      }
      return 0;
    }
    if (value_cmd->parsed()) {
      const Network net = load(value_opts);
      const DemandMode mode = parse_demand_mode(value_opts.mode);
      Sink sink(value_opts.output, out);
      if (!value_coalition.empty()) {
        const Coalition c = parse_coalition(value_coalition, net.providers());
        CharacteristicFunction cf(net.providers(), mode);
        cf.set(c, coalition_value(net, c, mode).value);
        print_value(sink.get(), cf, c, value_opts.csv);
      } else {
        print_values(sink.get(), characteristic_function(net, mode, value_opts.threads), value_opts.csv);
      }
      return 0;
    }
    if (alloc_cmd->parsed()) {
      const Network net = load(alloc_opts);
      const auto cf = characteristic_function(net, parse_demand_mode(alloc_opts.mode), alloc_opts.threads);
      const Allocation x = method == "dual" ? dual_payoff(net, cf) : shapley(cf);
      Sink sink(alloc_opts.output, out);
      print_allocation(sink.get(), cf, x, alloc_opts.csv);
      return 0;
    }
    if (core_cmd->parsed()) {
      const Network net = load(core_opts);
      const auto cf = characteristic_function(net, parse_demand_mode(core_opts.mode), core_opts.threads);
      Allocation x;
      x.payoffs = parse_list(x_text);
      if (x.payoffs.size() != static_cast<std::size_t>(net.providers())) {
        throw DomainError("--x needs " + std::to_string(net.providers()) + " values, got " +
                          std::to_string(x.payoffs.size()));
      }
      Sink sink(core_opts.output, out);
      print_core_report(sink.get(), in_core(cf, x), core_opts.csv);
      return 0;
    }
    if (struct_cmd->parsed()) {
      const Network net = load(struct_opts);
      const auto cf = characteristic_function(net, parse_demand_mode(struct_opts.mode), struct_opts.threads);
      Sink sink(struct_opts.output, out);
      print_structure_table(sink.get(), structure_table(net, cf), struct_opts.csv);
      return 0;
    }
    if (plot_cmd->parsed()) {
      const Network net = load(plot_opts);
      const auto cf = characteristic_function(net, parse_demand_mode(plot_opts.mode), plot_opts.threads);
      render_barycentric(cf, {dual_payoff(net, cf), shapley(cf)}, plot_opts.output);
      return 0;
    }
    if (breakdown_cmd->parsed()) {
      const Network net = load(breakdown_opts);
      const Coalition c = breakdown_coalition.empty() ? Coalition::grand(net.providers())
                                                      : parse_coalition(breakdown_coalition, net.providers());
      const CoalitionOutcome outcome = coalition_value(net, c, parse_demand_mode(breakdown_opts.mode));
      Sink sink(breakdown_opts.output, out);
      print_breakdown(sink.get(), payoff_breakdown(outcome.routing, net, net.params()), breakdown_opts.csv);
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace meshcoop::cli
