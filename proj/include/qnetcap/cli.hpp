#pragma once

// Command-line entry point. Subcommands: chain, netcap single-path, netcap
// multi-path, cuts, multi-unicast, multicast, multi-multicast, single-key-lb,
// sweep. Exit codes: 0 success, 1 domain/validation failure (diagnostic on
// stderr, machine-readable error JSON on stdout under --format json), 2 usage
// error.

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qnetcap/report.hpp"

namespace qnetcap::cli {

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw io_error("cannot open file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == sep) {
      parts.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  parts.push_back(current);
  return parts;
}

inline std::vector<std::pair<std::string, std::string>> parse_pairs(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const std::string& item : split(text, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == item.size()) {
      throw std::invalid_argument("--pairs: expected 'a1:b1,a2:b2', got '" + text + "'");
    }
    pairs.emplace_back(item.substr(0, colon), item.substr(colon + 1));
  }
  return pairs;
}

inline std::vector<int> parse_int_list(const std::string& text, const std::string& flag) {
  std::vector<int> values;
  for (const std::string& item : split(text, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size()) {
        throw std::invalid_argument(item);
      }
      values.push_back(v);
    } catch (const std::exception&) {
      throw std::invalid_argument(flag + ": expected a comma-separated integer list, got '" +
                                  text + "'");
    }
  }
  return values;
}

struct OutputOptions {
  std::string format = "text";
  std::string units = "bits";

  Units unit() const { return units == "nats" ? Units::Nats : Units::Bits; }
};

inline void add_output_options(CLI::App* cmd, OutputOptions& opts) {
  cmd->add_option("--format", opts.format, "Output format")
      ->check(CLI::IsMember({"json", "csv", "text"}))
      ->capture_default_str();
  cmd->add_option("--units", opts.units, "Rate units")
      ->check(CLI::IsMember({"bits", "nats"}))
      ->capture_default_str();
}

inline std::string text_list(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    out += (i ? " " : "") + names[i];
  }
  return out;
}

inline std::string text_ids(const std::vector<int>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out += (i ? " " : "") + std::to_string(ids[i]);
  }
  return out;
}

inline void write_value_line(std::ostream& out, const std::string& label, const CapacityValue& v,
                             Units units) {
  out << label << ": " << format_value(v.bits * unit_scale(units)) << " " << units_name(units)
      << " (" << exactness_name(v.exactness) << ")\n";
}

inline void write_cut_text(std::ostream& out, const Network& net, const Cut& cut) {
  out << "cut side A: " << text_list(cut.side_a) << "\n";
  out << "cut side B: " << text_list(cut.side_b) << "\n";
  out << "cut set: " << text_ids(cut_set(net, cut).edge_ids) << "\n";
}

inline void emit_unicast(std::ostream& out, const OutputOptions& opts, const Network& net,
                         const std::string& command, const std::string& file,
                         const std::string& from, const std::string& to,
                         const UnicastReport& report) {
  const Units units = opts.unit();
  if (opts.format == "json") {
    nlohmann::json witnesses{{"cut", cut_to_json(net, report.witness_cut)}};
    if (report.route) {
      witnesses["route"] = route_to_json(*report.route);
    }
    if (report.flow) {
      witnesses["flow"] = flow_to_json(net, *report.flow, units);
    }
    nlohmann::json doc{
        {"query", {{"command", command}, {"file", file}, {"from", from}, {"to", to}}},
        {"units", units_name(units)},
        {"value", report.value.bits * unit_scale(units)},
        {"exactness", exactness_name(report.value.exactness)},
        {"witnesses", std::move(witnesses)},
        {"provenance", provenance_json(net)}};
    out << dump_json_report(doc);
    return;
  }
  if (opts.format == "csv") {
    out << "value,exactness,units\n"
        << format_value(report.value.bits * unit_scale(units)) << ","
        << exactness_name(report.value.exactness) << "," << units_name(units) << "\n";
    return;
  }
  out << command << " " << file << " from " << from << " to " << to << "\n";
  write_value_line(out, "value", report.value, units);
  if (report.route) {
    out << "route: " << text_list(report.route->points) << "\n";
    out << "bottleneck edge: " << report.route->bottleneck_edge << "\n";
  }
  write_cut_text(out, net, report.witness_cut);
  if (report.flow) {
    for (std::size_t k = 0; k < net.edges().size(); ++k) {
      const Edge& e = net.edges()[k];
      out << "flow edge " << e.id << " (" << e.u << "," << e.v
          << "): " << format_value(report.flow->edge_rates[k] * unit_scale(units)) << "\n";
    }
  }
}

inline void emit_region(std::ostream& out, const OutputOptions& opts, const Network& net,
                        const nlohmann::json& query, const RateRegionBounds& region,
                        const CapacityValue* symmetric_bound) {
  const Units units = opts.unit();
  if (opts.format == "json") {
    nlohmann::json doc{{"query", query},
                       {"units", units_name(units)},
                       {"constraints", region_to_json(net, region, units)},
                       {"provenance", provenance_json(net)}};
    if (symmetric_bound) {
      doc["symmetric_bound"] = capacity_to_json(*symmetric_bound, units);
    }
    out << dump_json_report(doc);
    return;
  }
  if (opts.format == "csv") {
    out << "sessions,bound,exactness\n";
    for (const RateConstraint& c : region.constraints) {
      std::string sessions;
      for (std::size_t i = 0; i < c.sessions.size(); ++i) {
        sessions += (i ? "+" : "") + std::to_string(c.sessions[i]);
      }
      out << sessions << "," << format_value(c.bound.bits * unit_scale(units)) << ","
          << exactness_name(c.bound.exactness) << "\n";
    }
    if (symmetric_bound) {
      out << "symmetric," << format_value(symmetric_bound->bits * unit_scale(units)) << ","
          << exactness_name(symmetric_bound->exactness) << "\n";
    }
    return;
  }
  out << query.at("command").get<std::string>() << " " << query.at("file").get<std::string>()
      << "\n";
  for (const RateConstraint& c : region.constraints) {
    std::string sessions;
    for (std::size_t i = 0; i < c.sessions.size(); ++i) {
      sessions += (i ? "+" : "") + std::to_string(c.sessions[i]);
    }
    out << "sum of sessions {" << sessions
        << "}: " << format_value(c.bound.bits * unit_scale(units)) << " " << units_name(units)
        << " (" << exactness_name(c.bound.exactness) << ")\n";
  }
  if (symmetric_bound) {
    write_value_line(out, "symmetric bound", *symmetric_bound, units);
  }
}

}  // namespace detail

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  using detail::OutputOptions;

  CLI::App app{"End-to-end capacities of repeater chains and quantum networks"};
  app.require_subcommand(1);

  // chain
  OutputOptions chain_opts;
  std::string chain_file;
  bool equidistant = false;
  double loss_db = -1.0;
  double distance_km = -1.0;
  int repeaters = 0;
  int bands = 1;
  double db_per_km = kDefaultFiberLossDbPerKm;
  bool diagnostics = false;
  CLI::App* chain_cmd = app.add_subcommand("chain", "Capacity of a linear repeater chain");
  auto* chain_file_opt =
      chain_cmd->add_option("file", chain_file, "Chain JSON file ({\"links\": [...]})");
  auto* equidistant_opt =
      chain_cmd->add_flag("--equidistant", equidistant, "Equidistant repeaters on a lossy line");
  chain_file_opt->excludes(equidistant_opt);
  auto* loss_opt = chain_cmd->add_option("--loss-db", loss_db, "Total loss of the line in dB")
                       ->check(CLI::NonNegativeNumber);
  auto* dist_opt =
      chain_cmd->add_option("--distance-km", distance_km, "Total length of the line in km")
          ->check(CLI::NonNegativeNumber);
  loss_opt->excludes(dist_opt);
  chain_cmd->add_option("--repeaters", repeaters, "Number of repeaters N")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  chain_cmd->add_option("--bands", bands, "Bands per link M")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  chain_cmd->add_option("--db-per-km", db_per_km, "Fiber loss rate")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  chain_cmd->add_flag("--diagnostics", diagnostics, "Include asymptotic approximations");
  detail::add_output_options(chain_cmd, chain_opts);

  // netcap single-path / multi-path
  OutputOptions netcap_opts;
  std::string netcap_file, netcap_from, netcap_to;
  CLI::App* netcap_cmd = app.add_subcommand("netcap", "End-to-end network capacity");
  netcap_cmd->require_subcommand(1);
  CLI::App* single_cmd = netcap_cmd->add_subcommand("single-path", "Sequential routing value");
  CLI::App* multi_cmd = netcap_cmd->add_subcommand("multi-path", "Flooding routing value");
  for (CLI::App* cmd : {single_cmd, multi_cmd}) {
    cmd->add_option("file", netcap_file, "Network JSON file")->required();
    cmd->add_option("--from", netcap_from, "Source point")->required();
    cmd->add_option("--to", netcap_to, "Sink point")->required();
    detail::add_output_options(cmd, netcap_opts);
  }

  // cuts
  OutputOptions cuts_opts;
  std::string cuts_file, cuts_from, cuts_to;
  CLI::App* cuts_cmd = app.add_subcommand("cuts", "Brute-force minimum cuts");
  cuts_cmd->add_option("file", cuts_file, "Network JSON file")->required();
  cuts_cmd->add_option("--from", cuts_from, "Source point")->required();
  cuts_cmd->add_option("--to", cuts_to, "Sink point")->required();
  detail::add_output_options(cuts_cmd, cuts_opts);

  // multi-unicast
  OutputOptions mu_opts;
  std::string mu_file, mu_pairs;
  std::string mu_routing = "multi";
  CLI::App* mu_cmd = app.add_subcommand("multi-unicast", "Rate-region bounds for unicast pairs");
  mu_cmd->add_option("file", mu_file, "Network JSON file")->required();
  mu_cmd->add_option("--pairs", mu_pairs, "Sessions as 'a1:b1,a2:b2'")->required();
  mu_cmd->add_option("--routing", mu_routing, "single or multi")
      ->check(CLI::IsMember({"single", "multi"}))
      ->capture_default_str();
  detail::add_output_options(mu_cmd, mu_opts);

  // multicast
  OutputOptions mc_opts;
  std::string mc_file, mc_from, mc_receivers;
  CLI::App* mc_cmd = app.add_subcommand("multicast", "One sender to many receivers");
  mc_cmd->add_option("file", mc_file, "Network JSON file")->required();
  mc_cmd->add_option("--from", mc_from, "Sender point")->required();
  mc_cmd->add_option("--receivers", mc_receivers, "Receivers as 'b1,b2'")->required();
  detail::add_output_options(mc_cmd, mc_opts);

  // multi-multicast
  OutputOptions mm_opts;
  std::string mm_file, mm_senders, mm_receivers;
  CLI::App* mm_cmd = app.add_subcommand("multi-multicast", "Many senders to many receivers");
  mm_cmd->add_option("file", mm_file, "Network JSON file")->required();
  mm_cmd->add_option("--senders", mm_senders, "Senders as 'a1,a2'")->required();
  mm_cmd->add_option("--receivers", mm_receivers, "Receivers as 'b1,b2'")->required();
  detail::add_output_options(mm_cmd, mm_opts);

  // single-key-lb
  OutputOptions sk_opts;
  std::string sk_file, sk_from, sk_receivers;
  CLI::App* sk_cmd =
      app.add_subcommand("single-key-lb", "Lower bound for one common multicast key");
  sk_cmd->add_option("file", sk_file, "Network JSON file")->required();
  sk_cmd->add_option("--from", sk_from, "Sender point")->required();
  sk_cmd->add_option("--receivers", sk_receivers, "Receivers as 'b1,b2'")->required();
  detail::add_output_options(sk_cmd, sk_opts);

  // sweep
  OutputOptions sweep_opts;
  std::string sweep_spec_text, sweep_repeaters = "0", sweep_bands;
  double sweep_db_per_km = kDefaultFiberLossDbPerKm;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Capacity curves over loss or distance");
  sweep_cmd->add_option("--sweep", sweep_spec_text, "Range as 'loss_db=start:stop:step'")
      ->required();
  sweep_cmd->add_option("--repeaters", sweep_repeaters, "Repeater counts, e.g. '0,1,2'")
      ->capture_default_str();
  sweep_cmd->add_option("--bands", sweep_bands, "Multiband widths, e.g. '10,100,1000'");
  sweep_cmd->add_option("--db-per-km", sweep_db_per_km, "Fiber loss rate")->capture_default_str();
  detail::add_output_options(sweep_cmd, sweep_opts);

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  const OutputOptions* active_opts = &chain_opts;
  if (netcap_cmd->parsed()) {
    active_opts = &netcap_opts;
  } else if (cuts_cmd->parsed()) {
    active_opts = &cuts_opts;
  } else if (mu_cmd->parsed()) {
    active_opts = &mu_opts;
  } else if (mc_cmd->parsed()) {
    active_opts = &mc_opts;
  } else if (mm_cmd->parsed()) {
    active_opts = &mm_opts;
  } else if (sk_cmd->parsed()) {
    active_opts = &sk_opts;
  } else if (sweep_cmd->parsed()) {
    active_opts = &sweep_opts;
  }

  auto fail = [&](std::string kind, const std::string& message) {
    if (message.find("unknown point") != std::string::npos) {
      kind = "unknown-point";
    }
    err << "error: " << message << "\n";
    if (active_opts->format == "json") {
      out << dump_json_report(
          nlohmann::json{{"error", {{"kind", kind}, {"message", message}}}});
    }
    return 1;
  };

  try {
    if (chain_cmd->parsed()) {
      const Units units = chain_opts.unit();
      nlohmann::json query{{"command", "chain"}};
      CapacityValue value;
      nlohmann::json provenance;
      std::optional<ChainAsymptotics> asym;
      if (!chain_file.empty()) {
        const Chain chain = parse_chain(detail::read_file(chain_file));
        value = chain_capacity(chain);
        provenance = provenance_json(chain);
        query["file"] = chain_file;
      } else if (equidistant) {
        if (loss_db < 0.0 && distance_km < 0.0) {
          throw std::invalid_argument("chain: --equidistant needs --loss-db or --distance-km");
        }
        const double total_db = loss_db >= 0.0 ? loss_db : distance_km * db_per_km;
        const double eta_total = loss_db_to_eta(total_db);
        const double per_link = std::pow(eta_total, 1.0 / (repeaters + 1));
        if (bands > 1) {
          value = multiband_chain_capacity(
              std::vector<MultibandLink>(repeaters + 1, {per_link, bands}));
          provenance = nlohmann::json::array(
              {{{"formula", "multiband equidistant: C=-M*log2(1-eta^(1/(N+1)))"}}});
        } else {
          value = equidistant_lossy_chain(eta_total, repeaters);
          provenance =
              nlohmann::json::array({{{"formula", "equidistant: C=-log2(1-eta^(1/(N+1)))"}}});
        }
        query["loss_db"] = total_db;
        query["eta_total"] = eta_total;
        query["eta_per_link"] = per_link;
        query["repeaters"] = repeaters;
        query["bands"] = bands;
        if (diagnostics && repeaters >= 1 && eta_total > 0.0 && eta_total < 1.0) {
          asym = chain_asymptotics(eta_total, repeaters);
        }
      } else {
        throw std::invalid_argument("chain: provide a chain file or --equidistant");
      }
      if (chain_opts.format == "json") {
        nlohmann::json doc{{"query", std::move(query)},
                           {"units", units_name(units)},
                           {"value", value.bits * unit_scale(units)},
                           {"exactness", exactness_name(value.exactness)},
                           {"provenance", std::move(provenance)}};
        if (asym) {
          doc["diagnostics"] = {{"repeater_dominant", asym->repeater_dominant * unit_scale(units)},
                                {"loss_dominant", asym->loss_dominant * unit_scale(units)}};
        }
        out << dump_json_report(doc);
      } else if (chain_opts.format == "csv") {
        out << "value,exactness,units\n"
            << format_value(value.bits * unit_scale(units)) << ","
            << exactness_name(value.exactness) << "," << units_name(units) << "\n";
      } else {
        detail::write_value_line(out, "chain capacity", value, units);
        if (asym) {
          out << "repeater-dominant approximation: "
              << format_value(asym->repeater_dominant * unit_scale(units)) << "\n";
          out << "loss-dominant approximation: "
              << format_value(asym->loss_dominant * unit_scale(units)) << "\n";
        }
      }
      return 0;
    }

    if (netcap_cmd->parsed()) {
      const Network net = parse_network(detail::read_file(netcap_file));
      const bool single = single_cmd->parsed();
      const UnicastReport report = single ? single_path_capacity(net, netcap_from, netcap_to)
                                          : multipath_capacity(net, netcap_from, netcap_to);
      detail::emit_unicast(out, netcap_opts, net,
                           single ? "netcap single-path" : "netcap multi-path", netcap_file,
                           netcap_from, netcap_to, report);
      return 0;
    }

    if (cuts_cmd->parsed()) {
      const Network net = parse_network(detail::read_file(cuts_file));
      const Units units = cuts_opts.unit();
      const MinCutResult single = min_cut_bruteforce(net, {cuts_from}, {cuts_to}, CutMode::SingleEdge);
      const MinCutResult multi = min_cut_bruteforce(net, {cuts_from}, {cuts_to}, CutMode::MultiEdge);
      const std::uint64_t count = enumerate_cuts(net, {cuts_from}, {cuts_to}).count();
      if (cuts_opts.format == "json") {
        nlohmann::json doc{
            {"query",
             {{"command", "cuts"}, {"file", cuts_file}, {"from", cuts_from}, {"to", cuts_to}}},
            {"units", units_name(units)},
            {"cut_count", count},
            {"single_edge",
             {{"value", single.value.bits * unit_scale(units)},
              {"exactness", exactness_name(single.value.exactness)},
              {"cut", cut_to_json(net, single.witness)}}},
            {"multi_edge",
             {{"value", multi.value.bits * unit_scale(units)},
              {"exactness", exactness_name(multi.value.exactness)},
              {"cut", cut_to_json(net, multi.witness)}}},
            {"provenance", provenance_json(net)}};
        out << dump_json_report(doc);
      } else if (cuts_opts.format == "csv") {
        out << "mode,value,exactness\n"
            << "single_edge," << format_value(single.value.bits * unit_scale(units)) << ","
            << exactness_name(single.value.exactness) << "\n"
            << "multi_edge," << format_value(multi.value.bits * unit_scale(units)) << ","
            << exactness_name(multi.value.exactness) << "\n";
      } else {
        out << "cuts " << cuts_file << " from " << cuts_from << " to " << cuts_to << " ("
            << count << " cuts)\n";
        detail::write_value_line(out, "min single-edge cut", single.value, units);
        detail::write_cut_text(out, net, single.witness);
        detail::write_value_line(out, "min multi-edge cut", multi.value, units);
        detail::write_cut_text(out, net, multi.witness);
      }
      return 0;
    }

    if (mu_cmd->parsed()) {
      const Network net = parse_network(detail::read_file(mu_file));
      const RateRegionBounds region =
          multi_unicast_bounds(net, detail::parse_pairs(mu_pairs),
                               mu_routing == "single" ? RoutingMode::SinglePath
                                                      : RoutingMode::MultiPath);
      detail::emit_region(out, mu_opts, net,
                          {{"command", "multi-unicast"},
                           {"file", mu_file},
                           {"pairs", mu_pairs},
                           {"routing", mu_routing}},
                          region, nullptr);
      return 0;
    }

    if (mc_cmd->parsed()) {
      const Network net = parse_network(detail::read_file(mc_file));
      const MulticastReport report =
          multicast_bounds(net, mc_from, detail::split(mc_receivers, ','));
      detail::emit_region(out, mc_opts, net,
                          {{"command", "multicast"},
                           {"file", mc_file},
                           {"source", mc_from},
                           {"receivers", mc_receivers}},
                          report.region, &report.symmetric_bound);
      return 0;
    }

    if (mm_cmd->parsed()) {
      const Network net = parse_network(detail::read_file(mm_file));
      const RateRegionBounds region = multiple_multicast_bounds(
          net, detail::split(mm_senders, ','), detail::split(mm_receivers, ','));
      detail::emit_region(out, mm_opts, net,
                          {{"command", "multi-multicast"},
                           {"file", mm_file},
                           {"senders", mm_senders},
                           {"receivers", mm_receivers}},
                          region, nullptr);
      return 0;
    }

    if (sk_cmd->parsed()) {
      const Network net = parse_network(detail::read_file(sk_file));
      const Units units = sk_opts.unit();
      const CapacityValue value =
          single_key_multicast_lower_bound(net, sk_from, detail::split(sk_receivers, ','));
      if (sk_opts.format == "json") {
        out << dump_json_report(nlohmann::json{
            {"query",
             {{"command", "single-key-lb"},
              {"file", sk_file},
              {"source", sk_from},
              {"receivers", sk_receivers}}},
            {"units", units_name(units)},
            {"value", value.bits * unit_scale(units)},
            {"exactness", exactness_name(value.exactness)},
            {"bound_direction", "lower"},
            {"provenance", provenance_json(net)}});
      } else if (sk_opts.format == "csv") {
        out << "value,exactness,units\n"
            << format_value(value.bits * unit_scale(units)) << ","
            << exactness_name(value.exactness) << "," << units_name(units) << "\n";
      } else {
        detail::write_value_line(out, "single-key rate lower bound", value, units);
      }
      return 0;
    }

    if (sweep_cmd->parsed()) {
      const SweepSpec spec = parse_sweep_spec(sweep_spec_text);
      const std::vector<int> ns = detail::parse_int_list(sweep_repeaters, "--repeaters");
      const std::vector<int> ms =
          sweep_bands.empty() ? std::vector<int>{} : detail::parse_int_list(sweep_bands, "--bands");
      const SweepTable table = sweep_chain_curves(spec, ns, ms, sweep_db_per_km);
      if (sweep_opts.format == "json") {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& row : table.rows) {
          nlohmann::json jrow = nlohmann::json::array();
          for (std::size_t i = 0; i < row.size(); ++i) {
            jrow.push_back(i == 0 ? row[i] : row[i] * unit_scale(sweep_opts.unit()));
          }
          rows.push_back(std::move(jrow));
        }
        out << dump_json_report(nlohmann::json{
            {"query", {{"command", "sweep"}, {"spec", sweep_spec_text}}},
            {"units", units_name(sweep_opts.unit())},
            {"header", table.header},
            {"rows", std::move(rows)}});
      } else {
        out << sweep_to_csv(table, sweep_opts.unit());
      }
      return 0;
    }
  } catch (const io_error& e) {
    return fail("file-not-found", e.what());
  } catch (const enumeration_limit_error& e) {
    return fail("enumeration-cap", e.what());
  } catch (const parse_error& e) {
    return fail("schema", e.what());
  } catch (const std::domain_error& e) {
    return fail("domain", e.what());
  } catch (const std::invalid_argument& e) {
    return fail("invalid-argument", e.what());
  }
  return 2;
}

}  // namespace qnetcap::cli
