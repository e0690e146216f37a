// ncsat - link-level simulator for non-coherent massive MIMO satellite links
// Copyright (C) 2026 the ncsat authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "ncsat/config.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

namespace ncsat {

namespace {

using json = nlohmann::ordered_json;

const std::set<std::string> kKnownKeys = {
    "preset",         "name",          "num_users",         "psk_order",
    "rotations",      "powers",        "n_ele",             "snr_db",
    "rician_factor",  "phase_noise_bound", "doppler_drift", "sat_altitude_m",
    "users",          "frame_length",  "frames_per_point",  "channel_mode",
    "wavelength_m",   "spacing_wavelengths", "tx_gain",     "master_seed",
};

const std::vector<std::string> kRequiredKeys = {
    "num_users", "psk_order", "n_ele", "snr_db", "users", "sat_altitude_m",
};

[[noreturn]] void fail(const std::string& message) { throw config_error(message); }

double number_or_inf(const json& value, const std::string& field)
{
    if (value.is_number())
        return value.get<double>();
    if (value.is_string() && value.get<std::string>() == "inf")
        return std::numeric_limits<double>::infinity();
    fail(field + ": expected a number or \"inf\"");
}

double expect_number(const json& value, const std::string& field)
{
    if (!value.is_number())
        fail(field + ": expected a number");
    return value.get<double>();
}

int expect_int(const json& value, const std::string& field)
{
    if (!value.is_number_integer())
        fail(field + ": expected an integer");
    return value.get<int>();
}

std::vector<double> expect_number_array(const json& value, const std::string& field)
{
    if (!value.is_array())
        fail(field + ": expected an array of numbers");
    std::vector<double> out;
    out.reserve(value.size());
    for (const auto& element : value)
        out.push_back(expect_number(element, field));
    return out;
}

// Shortest representation that parses back to the same double.
std::string format_double(double value)
{
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    char buffer[32];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

double parse_double(const std::string& text, const std::string& what)
{
    if (text == "inf")
        return std::numeric_limits<double>::infinity();
    if (text == "-inf")
        return -std::numeric_limits<double>::infinity();
    try {
        std::size_t used = 0;
        const double value = std::stod(text, &used);
        if (used != text.size())
            fail(what + ": trailing characters in number '" + text + "'");
        return value;
    } catch (const std::invalid_argument&) {
        fail(what + ": not a number: '" + text + "'");
    } catch (const std::out_of_range&) {
        fail(what + ": number out of range: '" + text + "'");
    }
}

json double_or_inf_json(double value)
{
    if (std::isinf(value))
        return json("inf");
    return json(value);
}

ScenarioConfig config_from_json(const json& doc)
{
    if (!doc.is_object())
        fail("config: document root must be an object");

    for (const auto& item : doc.items())
        if (!kKnownKeys.count(item.key()))
            fail("config: unknown key '" + item.key() + "'");

    ScenarioConfig config;
    bool from_preset = false;
    if (doc.contains("preset")) {
        if (!doc["preset"].is_string())
            fail("preset: expected a string");
        config = preset_by_name(doc["preset"].get<std::string>());
        from_preset = true;
    } else {
        std::string missing;
        for (const std::string& key : kRequiredKeys)
            if (!doc.contains(key))
                missing += missing.empty() ? key : (", " + key);
        if (!missing.empty())
            fail("config: missing required fields: " + missing);
    }

    if (doc.contains("name")) {
        if (!doc["name"].is_string())
            fail("name: expected a string");
        config.name = doc["name"].get<std::string>();
    }

    const bool users_changed = doc.contains("num_users") || doc.contains("psk_order");
    if (doc.contains("num_users"))
        config.num_users = expect_int(doc["num_users"], "num_users");
    if (doc.contains("psk_order"))
        config.psk_order = expect_int(doc["psk_order"], "psk_order");
    if (config.num_users < 1)
        fail("num_users: must be >= 1");
    if (config.psk_order < 2)
        fail("psk_order: must be >= 2");

    if (doc.contains("rotations")) {
        const json& value = doc["rotations"];
        if (value.is_string() && value.get<std::string>() == "auto")
            config.rotations = assign_rotations(config.num_users, config.psk_order);
        else
            config.rotations = expect_number_array(value, "rotations");
    } else if (!from_preset || users_changed) {
        config.rotations = assign_rotations(config.num_users, config.psk_order);
    }

    if (doc.contains("powers"))
        config.powers = expect_number_array(doc["powers"], "powers");
    else if (!from_preset || users_changed)
        config.powers.assign(static_cast<std::size_t>(config.num_users), 1.0);

    if (doc.contains("n_ele")) {
        if (!doc["n_ele"].is_array())
            fail("n_ele: expected an array of integers");
        config.n_ele_list.clear();
        for (const auto& element : doc["n_ele"])
            config.n_ele_list.push_back(expect_int(element, "n_ele"));
    }

    if (doc.contains("snr_db")) {
        if (!doc["snr_db"].is_array())
            fail("snr_db: expected an array of numbers (or \"inf\")");
        config.snr_db_list.clear();
        for (const auto& element : doc["snr_db"])
            config.snr_db_list.push_back(number_or_inf(element, "snr_db"));
    }

    if (doc.contains("rician_factor"))
        config.rician_factor = number_or_inf(doc["rician_factor"], "rician_factor");
    if (doc.contains("phase_noise_bound"))
        config.phase_noise_bound = expect_number(doc["phase_noise_bound"], "phase_noise_bound");
    if (doc.contains("doppler_drift"))
        config.doppler_drift = expect_number(doc["doppler_drift"], "doppler_drift");
    if (doc.contains("sat_altitude_m"))
        config.sat_altitude_m = expect_number(doc["sat_altitude_m"], "sat_altitude_m");

    if (doc.contains("users")) {
        if (!doc["users"].is_array())
            fail("users: expected an array of {lat_rad, lon_rad} objects");
        config.users.clear();
        for (const auto& element : doc["users"]) {
            if (!element.is_object())
                fail("users: expected an array of {lat_rad, lon_rad} objects");
            for (const auto& item : element.items())
                if (item.key() != "lat_rad" && item.key() != "lon_rad")
                    fail("users: unknown key '" + item.key() + "'");
            if (!element.contains("lat_rad") || !element.contains("lon_rad"))
                fail("users: each entry needs lat_rad and lon_rad");
            config.users.push_back({expect_number(element["lat_rad"], "users.lat_rad"),
                                    expect_number(element["lon_rad"], "users.lon_rad")});
        }
    }

    if (doc.contains("frame_length"))
        config.frame_length = expect_int(doc["frame_length"], "frame_length");
    if (doc.contains("frames_per_point"))
        config.frames_per_point = expect_int(doc["frames_per_point"], "frames_per_point");

    if (doc.contains("channel_mode")) {
        if (!doc["channel_mode"].is_string())
            fail("channel_mode: expected \"normalized\" or \"link_budget\"");
        const std::string mode = doc["channel_mode"].get<std::string>();
        if (mode == "normalized")
            config.channel_mode = ChannelMode::normalized;
        else if (mode == "link_budget")
            config.channel_mode = ChannelMode::link_budget;
        else
            fail("channel_mode: expected \"normalized\" or \"link_budget\", got '" + mode + "'");
    }

    if (doc.contains("wavelength_m"))
        config.wavelength_m = expect_number(doc["wavelength_m"], "wavelength_m");
    if (doc.contains("spacing_wavelengths"))
        config.spacing_wavelengths = expect_number(doc["spacing_wavelengths"], "spacing_wavelengths");

    if (doc.contains("tx_gain"))
        config.tx_gain = expect_number_array(doc["tx_gain"], "tx_gain");
    else if (!from_preset || users_changed)
        config.tx_gain.assign(static_cast<std::size_t>(config.num_users), 1.0);

    if (doc.contains("master_seed")) {
        if (!doc["master_seed"].is_number_unsigned())
            fail("master_seed: expected a non-negative integer");
        config.master_seed = doc["master_seed"].get<std::uint64_t>();
    }

    validate(config);
    return config;
}

json config_to_json_object(const ScenarioConfig& config)
{
    json doc;
    doc["name"] = config.name;
    doc["num_users"] = config.num_users;
    doc["psk_order"] = config.psk_order;
    doc["rotations"] = config.rotations;
    doc["powers"] = config.powers;
    doc["n_ele"] = config.n_ele_list;
    doc["snr_db"] = json::array();
    for (double snr : config.snr_db_list)
        doc["snr_db"].push_back(double_or_inf_json(snr));
    doc["rician_factor"] = double_or_inf_json(config.rician_factor);
    doc["phase_noise_bound"] = config.phase_noise_bound;
    doc["doppler_drift"] = config.doppler_drift;
    doc["sat_altitude_m"] = config.sat_altitude_m;
    doc["users"] = json::array();
    for (const UserPosition& user : config.users)
        doc["users"].push_back({{"lat_rad", user.lat_rad}, {"lon_rad", user.lon_rad}});
    doc["frame_length"] = config.frame_length;
    doc["frames_per_point"] = config.frames_per_point;
    doc["channel_mode"] =
        config.channel_mode == ChannelMode::normalized ? "normalized" : "link_budget";
    doc["wavelength_m"] = config.wavelength_m;
    doc["spacing_wavelengths"] = config.spacing_wavelengths;
    doc["tx_gain"] = config.tx_gain;
    doc["master_seed"] = config.master_seed;
    return doc;
}

// Byte offset -> "line L, column C" for parse diagnostics.
std::string locate(const std::string& text, std::size_t byte)
{
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

std::vector<std::string> split_line(const std::string& line)
{
    std::vector<std::string> fields;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, ','))
        fields.push_back(field);
    return fields;
}

} // namespace

ScenarioConfig parse_config(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const nlohmann::json::parse_error& error) {
        fail("config: parse error at " + locate(text, error.byte) + ": " + error.what());
    }
    return config_from_json(doc);
}

ScenarioConfig parse_config_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        fail("config: cannot open '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string config_to_json(const ScenarioConfig& config)
{
    return config_to_json_object(config).dump(2) + "\n";
}

ScenarioConfig preset_by_name(const std::string& name)
{
    if (name == "vsat_geo")
        return preset_vsat_geo();
    if (name == "mega_leo")
        return preset_mega_leo();
    fail("preset: unknown preset '" + name + "' (available: vsat_geo, mega_leo)");
}

RunManifest make_manifest(const std::string& config_path, const ScenarioConfig& config,
                          const std::string& output_dir)
{
    RunManifest manifest;
    manifest.config_path = config_path;
    manifest.config = config;
    manifest.output_dir = output_dir;
    manifest.master_seed = config.master_seed;

    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &utc);
    manifest.timestamp = stamp;
    return manifest;
}

std::string manifest_to_json(const RunManifest& manifest)
{
    json doc;
    doc["tool"] = "ncsat";
    doc["version"] = manifest.tool_version;
    doc["generated_at"] = manifest.timestamp;
    doc["config_path"] = manifest.config_path;
    doc["output_dir"] = manifest.output_dir;
    doc["master_seed"] = manifest.master_seed;
    doc["results_csv"] = "results.csv";
    doc["config"] = config_to_json_object(manifest.config);
    return doc.dump(2) + "\n";
}

RunManifest parse_manifest(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const nlohmann::json::parse_error& error) {
        fail("manifest: parse error at " + locate(text, error.byte) + ": " + error.what());
    }
    for (const char* key : {"tool", "version", "generated_at", "config_path", "output_dir",
                            "master_seed", "config"})
        if (!doc.contains(key))
            fail(std::string("manifest: missing field '") + key + "'");

    RunManifest manifest;
    manifest.config_path = doc["config_path"].get<std::string>();
    manifest.output_dir = doc["output_dir"].get<std::string>();
    manifest.tool_version = doc["version"].get<std::string>();
    manifest.timestamp = doc["generated_at"].get<std::string>();
    manifest.master_seed = doc["master_seed"].get<std::uint64_t>();
    manifest.config = config_from_json(doc["config"]);
    return manifest;
}

std::string format_results_csv(const std::vector<BerRecord>& records)
{
    std::string out = "n_ele,R,snr_db,user_id,bit_errors,bits,ber,aggregate_ber,frames,seed\n";
    for (const BerRecord& record : records) {
        std::uint64_t total_errors = 0;
        std::uint64_t total_bits = 0;
        for (std::size_t j = 0; j < record.per_user_bit_errors.size(); ++j) {
            total_errors += record.per_user_bit_errors[j];
            total_bits += record.per_user_bits[j];
            out += std::to_string(record.n_ele) + ',' + std::to_string(record.num_rx) + ',' +
                   format_double(record.snr_db) + ',' + std::to_string(j) + ',' +
                   std::to_string(record.per_user_bit_errors[j]) + ',' +
                   std::to_string(record.per_user_bits[j]) + ',' +
                   format_double(record.per_user_ber[j]) + ',' +
                   format_double(record.aggregate_ber) + ',' + std::to_string(record.frames_run) +
                   ',' + std::to_string(record.master_seed) + '\n';
        }
        out += std::to_string(record.n_ele) + ',' + std::to_string(record.num_rx) + ',' +
               format_double(record.snr_db) + ",-1," + std::to_string(total_errors) + ',' +
               std::to_string(total_bits) + ',' + format_double(record.aggregate_ber) + ',' +
               format_double(record.aggregate_ber) + ',' + std::to_string(record.frames_run) + ',' +
               std::to_string(record.master_seed) + '\n';
    }
    return out;
}

std::vector<BerRecord> parse_results_csv(const std::string& text)
{
    std::istringstream stream(text);
    std::string line;
    if (!std::getline(stream, line))
        fail("results: empty CSV");
    if (line != "n_ele,R,snr_db,user_id,bit_errors,bits,ber,aggregate_ber,frames,seed")
        fail("results: unexpected CSV header: " + line);

    std::vector<BerRecord> records;
    BerRecord current;
    bool open = false;
    std::size_t line_no = 1;
    while (std::getline(stream, line)) {
        ++line_no;
        if (line.empty())
            continue;
        const std::vector<std::string> fields = split_line(line);
        if (fields.size() != 10)
            fail("results: line " + std::to_string(line_no) + ": expected 10 fields, got " +
                 std::to_string(fields.size()));

        const std::string where = "results: line " + std::to_string(line_no);
        const int n_ele = static_cast<int>(parse_double(fields[0], where));
        const int num_rx = static_cast<int>(parse_double(fields[1], where));
        const double snr_db = parse_double(fields[2], where);
        const long user_id = std::stol(fields[3]);
        const std::uint64_t errors = std::stoull(fields[4]);
        const std::uint64_t bits = std::stoull(fields[5]);
        const double ber = parse_double(fields[6], where);
        const double aggregate = parse_double(fields[7], where);
        const int frames = static_cast<int>(std::stol(fields[8]));
        const std::uint64_t seed = std::stoull(fields[9]);

        if (!open) {
            current = BerRecord{};
            current.n_ele = n_ele;
            current.num_rx = num_rx;
            current.snr_db = snr_db;
            current.frames_run = frames;
            current.master_seed = seed;
            open = true;
        }

        if (user_id < 0) {
            current.aggregate_ber = aggregate;
            records.push_back(current);
            open = false;
        } else {
            if (static_cast<std::size_t>(user_id) != current.per_user_bit_errors.size())
                fail(where + ": user rows out of order");
            current.per_user_bit_errors.push_back(errors);
            current.per_user_bits.push_back(bits);
            current.per_user_ber.push_back(ber);
        }
    }
    if (open)
        fail("results: CSV ends mid-record (missing aggregate row)");
    return records;
}

void emit_results(const std::vector<BerRecord>& records, const RunManifest& manifest)
{
    if (records.empty())
        throw std::runtime_error("emit_results: no records");

    // Engine contract: records enumerate the config's sweep grid in order.
    const ScenarioConfig& config = manifest.config;
    const std::size_t expected =
        config.n_ele_list.size() * config.snr_db_list.size();
    if (records.size() != expected)
        throw std::runtime_error("emit_results: record count does not match the sweep grid");
    std::size_t idx = 0;
    for (int n_ele : config.n_ele_list)
        for (double snr_db : config.snr_db_list) {
            const BerRecord& record = records[idx++];
            const bool snr_match = record.snr_db == snr_db ||
                                   (std::isinf(record.snr_db) && std::isinf(snr_db));
            if (record.n_ele != n_ele || !snr_match)
                throw std::runtime_error("emit_results: records out of sweep order at index " +
                                         std::to_string(idx - 1));
        }

    const std::filesystem::path out_dir(manifest.output_dir);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);

    const std::filesystem::path csv_path = out_dir / "results.csv";
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv)
        throw std::runtime_error("emit_results: cannot write '" + csv_path.string() + "'");
    csv << format_results_csv(records);
    csv.close();
    if (!csv)
        throw std::runtime_error("emit_results: write failed for '" + csv_path.string() + "'");

    const std::filesystem::path manifest_path = out_dir / "manifest.json";
    std::ofstream mf(manifest_path, std::ios::binary);
    if (!mf)
        throw std::runtime_error("emit_results: cannot write '" + manifest_path.string() + "'");
    mf << manifest_to_json(manifest);
    mf.close();
    if (!mf)
        throw std::runtime_error("emit_results: write failed for '" + manifest_path.string() + "'");
}

std::vector<BerRecord> read_results_csv(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("results: cannot open '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_results_csv(buffer.str());
}

} // namespace ncsat
