#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <numbers>
#include <sstream>

#include "qnetcap/cli.hpp"
#include "qnetcap/report.hpp"

using namespace qnetcap;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const std::string kDataDir = QNETCAP_DATA_DIR;
const std::string kSchemaDir = QNETCAP_SCHEMA_DIR;

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

// Just enough of JSON Schema to check the published report schema: type,
// enum, required, properties, items, oneOf and local $refs.
bool validates(const nlohmann::json& doc, const nlohmann::json& schema,
               const nlohmann::json& root) {
  if (schema.contains("$ref")) {
    const std::string ref = schema.at("$ref").get<std::string>();
    const std::string prefix = "#/definitions/";
    REQUIRE(ref.rfind(prefix, 0) == 0);
    return validates(doc, root.at("definitions").at(ref.substr(prefix.size())), root);
  }
  if (schema.contains("oneOf")) {
    int hits = 0;
    for (const auto& sub : schema.at("oneOf")) {
      hits += validates(doc, sub, root) ? 1 : 0;
    }
    return hits == 1;
  }
  if (schema.contains("enum")) {
    for (const auto& v : schema.at("enum")) {
      if (v == doc) {
        return true;
      }
    }
    return false;
  }
  if (schema.contains("type")) {
    const std::string type = schema.at("type").get<std::string>();
    if (type == "object" && !doc.is_object()) return false;
    if (type == "array" && !doc.is_array()) return false;
    if (type == "string" && !doc.is_string()) return false;
    if (type == "integer" && !(doc.is_number_integer() || doc.is_number_unsigned())) return false;
    if (type == "number" && !doc.is_number()) return false;
    if (type == "boolean" && !doc.is_boolean()) return false;
  }
  if (schema.contains("required")) {
    for (const auto& key : schema.at("required")) {
      if (!doc.contains(key.get<std::string>())) {
        return false;
      }
    }
  }
  if (schema.contains("properties") && doc.is_object()) {
    for (const auto& [key, sub] : schema.at("properties").items()) {
      if (doc.contains(key) && !validates(doc.at(key), sub, root)) {
        return false;
      }
    }
  }
  if (schema.contains("items") && doc.is_array()) {
    for (const auto& item : doc) {
      if (!validates(item, schema.at("items"), root)) {
        return false;
      }
    }
  }
  return true;
}

nlohmann::json report_schema() {
  std::ifstream in(kSchemaDir + "/report.schema.json");
  REQUIRE(in.good());
  return nlohmann::json::parse(in);
}

}  // namespace

TEST_CASE("value formatting") {
  REQUIRE(format_value(1.0) == "1");
  REQUIRE(format_value(0.15200309344504998) == "0.152003093445");
  REQUIRE(format_value(kInfiniteBits) == "inf");
  REQUIRE(format_value(123456.789) == "123456.789");
}

TEST_CASE("report serialization round-trips losslessly") {
  const nlohmann::json doc{{"query", {{"command", "chain"}}},
                           {"units", "bits"},
                           {"value", 1.0 / 3.0},
                           {"exactness", "exact"},
                           {"big", 1e300},
                           {"tiny", 1.2345678901234e-7}};
  const std::string once = dump_json_report(doc);
  const std::string twice = dump_json_report(nlohmann::json::parse(once));
  REQUIRE(once == twice);
  REQUIRE_THAT(once, ContainsSubstring("0.333333333333"));
}

TEST_CASE("infinity renders as the string inf") {
  const nlohmann::json doc{{"value", kInfiniteBits}};
  const std::string text = dump_json_report(doc);
  REQUIRE_THAT(text, ContainsSubstring("\"inf\""));
  REQUIRE(nlohmann::json::parse(text).at("value").get<std::string>() == "inf");
}

TEST_CASE("sweep spec parsing") {
  const SweepSpec spec = parse_sweep_spec("loss_db=0:70:1");
  REQUIRE(spec.variable == "loss_db");
  REQUIRE(spec.start == 0.0);
  REQUIRE(spec.stop == 70.0);
  REQUIRE(spec.step == 1.0);
  REQUIRE_THROWS_AS(parse_sweep_spec("loss_db=10:0:1"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_sweep_spec("loss_db=0:10:0"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_sweep_spec("bogus=0:10:1"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_sweep_spec("loss_db=0:10"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_sweep_spec("loss_db=a:b:c"), std::invalid_argument);
}

TEST_CASE("sweep tables") {
  const SweepTable table =
      sweep_chain_curves(parse_sweep_spec("loss_db=0:70:1"), {1, 2, 10, 100}, {});
  REQUIRE(table.rows.size() == 71);
  REQUIRE(table.header.size() == 5);
  REQUIRE(table.header[0] == "loss_db");
  REQUIRE(table.header[1] == "N=1");
  for (const auto& row : table.rows) {
    REQUIRE(row.size() == 5);
  }
  REQUIRE(table.rows[0][1] == kInfiniteBits);  // 0 dB

  const std::string csv = sweep_to_csv(table, Units::Bits);
  REQUIRE_THAT(csv, ContainsSubstring("loss_db,N=1,N=2,N=10,N=100\n"));
  REQUIRE_THAT(csv, ContainsSubstring("0,inf,inf,inf,inf\n"));

  // distance sweeps convert through the fiber loss rate
  const SweepTable dist =
      sweep_chain_curves(parse_sweep_spec("distance_km=10:100:10"), {0}, {}, 0.2);
  for (const auto& row : dist.rows) {
    const double d = row[0];
    REQUIRE_THAT(row[1], WithinAbs(-std::log2(1.0 - std::pow(10.0, -0.02 * d)), 1e-12));
  }
}

TEST_CASE("cli: chain examples") {
  const CliResult r =
      run_cli({"chain", "--equidistant", "--loss-db", "30", "--repeaters", "2", "--format",
               "json"});
  REQUIRE(r.code == 0);
  const nlohmann::json doc = nlohmann::json::parse(r.out);
  REQUIRE_THAT(doc.at("value").get<double>(), WithinAbs(0.15200309344504998, 1e-12));
  REQUIRE(doc.at("exactness") == "exact");
  REQUIRE(validates(doc, report_schema(), report_schema()));

  const CliResult file_run = run_cli({"chain", kDataDir + "/diamond.json"});
  REQUIRE(file_run.code == 1);  // a network file is not a chain file

  // total distance at the default 0.2 dB/km: 150 km and 30 dB coincide
  const CliResult by_distance = run_cli(
      {"chain", "--equidistant", "--distance-km", "150", "--repeaters", "2", "--format", "json"});
  REQUIRE(by_distance.code == 0);
  REQUIRE_THAT(nlohmann::json::parse(by_distance.out).at("value").get<double>(),
               WithinAbs(0.15200309344504998, 1e-12));

  const CliResult diag = run_cli({"chain", "--equidistant", "--loss-db", "30", "--repeaters",
                                  "2", "--diagnostics", "--format", "json"});
  REQUIRE(nlohmann::json::parse(diag.out).contains("diagnostics"));

  const CliResult nats =
      run_cli({"chain", "--equidistant", "--loss-db", "30", "--repeaters", "2", "--format",
               "json", "--units", "nats"});
  const double bits_value = doc.at("value").get<double>();
  const double nats_value = nlohmann::json::parse(nats.out).at("value").get<double>();
  REQUIRE_THAT(nats_value, WithinRel(bits_value * std::numbers::ln2, 1e-11));
}

TEST_CASE("cli: netcap on the diamond") {
  const std::string file = kDataDir + "/diamond.json";
  const CliResult single =
      run_cli({"netcap", "single-path", file, "--from", "a", "--to", "b", "--format", "json"});
  REQUIRE(single.code == 0);
  const nlohmann::json sdoc = nlohmann::json::parse(single.out);
  REQUIRE_THAT(sdoc.at("value").get<double>(), WithinAbs(1.0, 1e-12));
  REQUIRE(sdoc.at("witnesses").contains("route"));
  REQUIRE(validates(sdoc, report_schema(), report_schema()));

  const CliResult multi =
      run_cli({"netcap", "multi-path", file, "--from", "a", "--to", "b", "--format", "json"});
  const nlohmann::json mdoc = nlohmann::json::parse(multi.out);
  REQUIRE_THAT(mdoc.at("value").get<double>(), WithinAbs(2.0, 1e-12));
  REQUIRE(mdoc.at("witnesses").contains("flow"));
  REQUIRE(validates(mdoc, report_schema(), report_schema()));

  // byte-identical reruns
  const CliResult again =
      run_cli({"netcap", "multi-path", file, "--from", "a", "--to", "b", "--format", "json"});
  REQUIRE(again.out == multi.out);

  const CliResult text = run_cli({"netcap", "single-path", file, "--from", "a", "--to", "b"});
  REQUIRE_THAT(text.out, ContainsSubstring("value: 1 bits (exact)"));

  const CliResult csv =
      run_cli({"netcap", "single-path", file, "--from", "a", "--to", "b", "--format", "csv"});
  REQUIRE_THAT(csv.out, ContainsSubstring("value,exactness,units\n1,exact,bits\n"));
}

TEST_CASE("cli: cuts and multi-user commands emit valid reports") {
  const std::string butterfly = kDataDir + "/butterfly.json";
  const nlohmann::json schema = report_schema();

  const CliResult cuts =
      run_cli({"cuts", kDataDir + "/diamond.json", "--from", "a", "--to", "b", "--format",
               "json"});
  REQUIRE(cuts.code == 0);
  const nlohmann::json cdoc = nlohmann::json::parse(cuts.out);
  REQUIRE(cdoc.at("cut_count") == 4);
  REQUIRE_THAT(cdoc.at("multi_edge").at("value").get<double>(), WithinAbs(2.0, 1e-12));
  REQUIRE(validates(cdoc, schema, schema));

  const CliResult mu = run_cli(
      {"multi-unicast", butterfly, "--pairs", "a1:b1,a2:b2", "--format", "json"});
  REQUIRE(mu.code == 0);
  const nlohmann::json mudoc = nlohmann::json::parse(mu.out);
  REQUIRE(mudoc.at("constraints").size() == 3);
  REQUIRE(validates(mudoc, schema, schema));

  const CliResult mc = run_cli(
      {"multicast", butterfly, "--from", "a1", "--receivers", "b1,b2", "--format", "json"});
  REQUIRE(mc.code == 0);
  const nlohmann::json mcdoc = nlohmann::json::parse(mc.out);
  REQUIRE_THAT(mcdoc.at("symmetric_bound").at("value").get<double>(), WithinAbs(2.0, 1e-12));
  REQUIRE(validates(mcdoc, schema, schema));

  const CliResult mm = run_cli({"multi-multicast", butterfly, "--senders", "a1,a2",
                                "--receivers", "b1,b2", "--format", "json"});
  REQUIRE(mm.code == 0);
  REQUIRE(validates(nlohmann::json::parse(mm.out), schema, schema));

  const CliResult sk = run_cli(
      {"single-key-lb", butterfly, "--from", "a1", "--receivers", "b1,b2", "--format", "json"});
  REQUIRE(sk.code == 0);
  const nlohmann::json skdoc = nlohmann::json::parse(sk.out);
  REQUIRE_THAT(skdoc.at("value").get<double>(), WithinAbs(2.0, 1e-12));
  REQUIRE(skdoc.at("bound_direction") == "lower");
  REQUIRE(validates(skdoc, schema, schema));
}

TEST_CASE("cli: sweep output") {
  const CliResult sweep = run_cli(
      {"sweep", "--sweep", "loss_db=0:70:1", "--repeaters", "1,2,10,100", "--format", "csv"});
  REQUIRE(sweep.code == 0);
  REQUIRE_THAT(sweep.out, ContainsSubstring("loss_db,N=1,N=2,N=10,N=100\n"));
  REQUIRE_THAT(sweep.out, ContainsSubstring("0,inf,inf,inf,inf\n"));
  REQUIRE(std::count(sweep.out.begin(), sweep.out.end(), '\n') == 72);  // header + 71 rows

  const CliResult bands = run_cli({"sweep", "--sweep", "distance_km=0:500:50", "--repeaters",
                                   "0,1", "--bands", "10,100,1000"});
  REQUIRE(bands.code == 0);
  REQUIRE_THAT(bands.out, ContainsSubstring("distance_km,N=0,N=1,M=10,M=100,M=1000\n"));

  const CliResult empty = run_cli({"sweep", "--sweep", "loss_db=10:0:1"});
  REQUIRE(empty.code == 1);
}

TEST_CASE("cli: errors and exit codes") {
  // usage errors
  REQUIRE(run_cli({}).code == 2);
  REQUIRE(run_cli({"bogus"}).code == 2);
  REQUIRE(run_cli({"netcap", "single-path"}).code == 2);

  // missing file -> machine-readable error JSON under --format json
  const CliResult missing = run_cli(
      {"netcap", "single-path", "/nonexistent.json", "--from", "a", "--to", "b", "--format",
       "json"});
  REQUIRE(missing.code == 1);
  REQUIRE_THAT(missing.err, ContainsSubstring("error"));
  const nlohmann::json edoc = nlohmann::json::parse(missing.out);
  REQUIRE(edoc.at("error").at("kind") == "file-not-found");

  // unknown point
  const CliResult badpoint = run_cli({"netcap", "single-path", kDataDir + "/diamond.json",
                                      "--from", "zz", "--to", "b", "--format", "json"});
  REQUIRE(badpoint.code == 1);
  REQUIRE(nlohmann::json::parse(badpoint.out).at("error").at("kind") == "unknown-point");

  // out-of-range numeric flags are usage errors
  REQUIRE(run_cli({"chain", "--equidistant", "--loss-db", "-3", "--repeaters", "1"}).code == 2);
  REQUIRE(run_cli({"chain", "--equidistant", "--loss-db", "3", "--bands", "0"}).code == 2);

  // schema violation
  const CliResult badfile = run_cli({"chain", kDataDir + "/diamond.json", "--format", "json"});
  REQUIRE(badfile.code == 1);
  REQUIRE(nlohmann::json::parse(badfile.out).at("error").at("kind") == "schema");

  // help
  REQUIRE(run_cli({"--help"}).code == 0);
}

TEST_CASE("cli: infinite capacities surface as the string inf") {
  const std::string path = "perfect_link_tmp.json";
  {
    std::ofstream out(path);
    out << R"({"points":["a","b"],"edges":[{"u":"a","v":"b","channel":{"kind":"lossy","eta":1.0}}]})";
  }
  const CliResult r =
      run_cli({"netcap", "single-path", path, "--from", "a", "--to", "b", "--format", "json"});
  REQUIRE(r.code == 0);
  const nlohmann::json doc = nlohmann::json::parse(r.out);
  REQUIRE(doc.at("value").get<std::string>() == "inf");
  REQUIRE(validates(doc, report_schema(), report_schema()));

  const CliResult text = run_cli({"netcap", "multi-path", path, "--from", "a", "--to", "b"});
  REQUIRE_THAT(text.out, ContainsSubstring("value: inf bits (exact)"));
  std::remove(path.c_str());
}

TEST_CASE("nats conversion scales every reported value") {
  const std::string file = kDataDir + "/diamond.json";
  const nlohmann::json bits = nlohmann::json::parse(
      run_cli({"netcap", "multi-path", file, "--from", "a", "--to", "b", "--format", "json"})
          .out);
  const nlohmann::json nats = nlohmann::json::parse(
      run_cli({"netcap", "multi-path", file, "--from", "a", "--to", "b", "--format", "json",
               "--units", "nats"})
          .out);
  REQUIRE_THAT(nats.at("value").get<double>(),
               WithinRel(bits.at("value").get<double>() * std::numbers::ln2, 1e-11));
  const auto& bits_rates = bits.at("witnesses").at("flow").at("edge_rates");
  const auto& nats_rates = nats.at("witnesses").at("flow").at("edge_rates");
  for (std::size_t i = 0; i < bits_rates.size(); ++i) {
    const double rb = bits_rates[i].at("rate").get<double>();
    const double rn = nats_rates[i].at("rate").get<double>();
    REQUIRE_THAT(rn, WithinAbs(rb * std::numbers::ln2, 1e-9));
  }
}
