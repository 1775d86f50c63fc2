#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <tuple>

#include <fmt/format.h>

#include "cargohitch/model.hpp"

namespace cargohitch {
namespace {

using Table = std::vector<std::map<std::string, std::string>>;

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  out.push_back(std::move(field));
  return out;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\xEF\xBB\xBF");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

Table read_table(const std::filesystem::path& dir, const std::string& name) {
  const auto path = dir / name;
  std::ifstream in(path);
  if (!in) throw IngestError(fmt::format("missing table {}", path.string()));
  std::string line;
  if (!std::getline(in, line)) throw IngestError(fmt::format("table {} has no header row", name));
  std::vector<std::string> header = split_csv_line(line);
  for (auto& h : header) h = trim(h);
  Table rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != header.size())
      throw IngestError(fmt::format("{} line {}: expected {} fields, found {}", name, line_no, header.size(), fields.size()));
    std::map<std::string, std::string> row;
    for (size_t i = 0; i < header.size(); ++i) row[header[i]] = trim(fields[i]);
    rows.push_back(std::move(row));
  }
  return rows;
}

const std::string& column(const std::map<std::string, std::string>& row, const std::string& key, const std::string& table) {
  const auto it = row.find(key);
  if (it == row.end()) throw IngestError(fmt::format("table {} lacks column '{}'", table, key));
  return it->second;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw IngestError(fmt::format("cannot parse {} '{}'", what, s));
  }
}

// Accepts plain seconds or HH:MM:SS (hours may exceed 23).
int parse_time(const std::string& s) {
  if (s.find(':') == std::string::npos) return static_cast<int>(to_double(s, "time"));
  int h = 0, m = 0, sec = 0;
  if (std::sscanf(s.c_str(), "%d:%d:%d", &h, &m, &sec) != 3) throw IngestError(fmt::format("cannot parse time '{}'", s));
  return h * 3600 + m * 60 + sec;
}

}  // namespace

std::vector<std::vector<int>> concatenate_trips(const std::vector<Trip>& trips) {
  const int n = static_cast<int>(trips.size());
  // Start/end events per stop.
  struct Event {
    int time;
    int trip;
    bool is_start;
  };
  std::map<int, std::vector<Event>> events;
  for (int i = 0; i < n; ++i) {
    if (trips[i].stops.empty()) continue;
    events[trips[i].stops.front().stop].push_back({trips[i].stops.front().time, i, true});
    events[trips[i].stops.back().stop].push_back({trips[i].stops.back().time, i, false});
  }
  std::vector<int> next(n, -1), prev(n, -1);
  for (auto& [stop, evs] : events) {
    std::sort(evs.begin(), evs.end(), [&](const Event& a, const Event& b) {
      return std::tie(a.time, a.is_start, trips[a.trip].id) < std::tie(b.time, b.is_start, trips[b.trip].id);
    });
    for (const Event& end : evs) {
      if (end.is_start) continue;
      // Earliest unlinked start at or after this end with no other event
      // strictly in between.
      int chosen = -1;
      int chosen_time = 0;
      for (const Event& cand : evs) {
        if (!cand.is_start || cand.trip == end.trip || cand.time < end.time || prev[cand.trip] >= 0) continue;
        if (chosen < 0 || cand.time < chosen_time) {
          chosen = cand.trip;
          chosen_time = cand.time;
        }
      }
      if (chosen < 0) continue;
      bool blocked = false;
      for (const Event& other : evs) {
        if (other.trip == end.trip || other.trip == chosen) continue;
        if (other.time > end.time && other.time < chosen_time) blocked = true;
      }
      if (blocked) continue;
      next[end.trip] = chosen;
      prev[chosen] = end.trip;
    }
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const int ta = trips[a].stops.empty() ? 0 : trips[a].stops.front().time;
    const int tb = trips[b].stops.empty() ? 0 : trips[b].stops.front().time;
    return std::tie(ta, trips[a].id) < std::tie(tb, trips[b].id);
  });
  std::vector<std::vector<int>> groups;
  for (int t : order) {
    if (prev[t] >= 0) continue;
    std::vector<int> chain;
    for (int c = t; c >= 0; c = next[c]) chain.push_back(c);
    groups.push_back(std::move(chain));
  }
  return groups;
}

Network ingest_gtfs_subset(const std::string& directory, const GtfsOptions& options) {
  if (options.window_start >= options.window_end) throw IngestError("time window must be nonempty");
  const std::filesystem::path dir(directory);
  const Table stops = read_table(dir, "stops.txt");
  const Table trips = read_table(dir, "trips.txt");
  const Table stop_times = read_table(dir, "stop_times.txt");

  Network net;
  bool planar = !stops.empty() && stops.front().count("x") && stops.front().count("y");
  double lat0 = 0.0, lon0 = 0.0;
  if (!planar) {
    for (const auto& row : stops) {
      lat0 += to_double(column(row, "stop_lat", "stops.txt"), "latitude");
      lon0 += to_double(column(row, "stop_lon", "stops.txt"), "longitude");
    }
    if (!stops.empty()) {
      lat0 /= static_cast<double>(stops.size());
      lon0 /= static_cast<double>(stops.size());
    }
  }
  constexpr double kEarthRadius = 6371000.0;
  constexpr double kDeg = 3.14159265358979323846 / 180.0;
  for (const auto& row : stops) {
    Stop s;
    s.id = column(row, "stop_id", "stops.txt");
    if (planar) {
      s.position = {to_double(column(row, "x", "stops.txt"), "x"), to_double(column(row, "y", "stops.txt"), "y")};
    } else {
      const double lat = to_double(column(row, "stop_lat", "stops.txt"), "latitude");
      const double lon = to_double(column(row, "stop_lon", "stops.txt"), "longitude");
      s.position = {kEarthRadius * (lon - lon0) * kDeg * std::cos(lat0 * kDeg), kEarthRadius * (lat - lat0) * kDeg};
    }
    if (net.find_stop(s.id) >= 0) throw IngestError(fmt::format("duplicate stop id '{}'", s.id));
    net.stops.push_back(std::move(s));
  }
  std::map<std::string, int> stop_index;
  for (size_t i = 0; i < net.stops.size(); ++i) stop_index[net.stops[i].id] = static_cast<int>(i);

  std::map<std::string, int> trip_index;
  std::vector<Trip> trip_list;
  for (const auto& row : trips) {
    const std::string& id = column(row, "trip_id", "trips.txt");
    column(row, "route_id", "trips.txt");
    if (trip_index.count(id)) throw IngestError(fmt::format("duplicate trip id '{}'", id));
    trip_index[id] = static_cast<int>(trip_list.size());
    trip_list.push_back({id, {}});
  }
  std::vector<std::vector<std::pair<int, RouteStop>>> events(trip_list.size());
  for (const auto& row : stop_times) {
    const std::string& trip = column(row, "trip_id", "stop_times.txt");
    const std::string& stop = column(row, "stop_id", "stop_times.txt");
    const auto t = trip_index.find(trip);
    if (t == trip_index.end()) throw IngestError(fmt::format("stop_times references unknown trip '{}'", trip));
    const auto s = stop_index.find(stop);
    if (s == stop_index.end()) throw IngestError(fmt::format("stop_times references unknown stop '{}'", stop));
    const int time = parse_time(column(row, "arrival_time", "stop_times.txt"));
    const int seq = static_cast<int>(to_double(column(row, "stop_sequence", "stop_times.txt"), "stop_sequence"));
    if (time < options.window_start || time > options.window_end) continue;
    events[t->second].push_back({seq, {s->second, time}});
  }
  std::vector<Trip> kept;
  for (size_t i = 0; i < trip_list.size(); ++i) {
    auto& ev = events[i];
    std::sort(ev.begin(), ev.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    Trip trip{trip_list[i].id, {}};
    for (const auto& e : ev) trip.stops.push_back(e.second);
    if (trip.stops.size() < 2) continue;
    for (size_t k = 1; k < trip.stops.size(); ++k)
      if (trip.stops[k].time <= trip.stops[k - 1].time)
        throw IngestError(fmt::format("trip '{}' has non-increasing arrival times", trip.id));
    kept.push_back(std::move(trip));
  }

  for (const std::string& id : options.terminals) {
    const auto s = stop_index.find(id);
    if (s == stop_index.end()) throw IngestError(fmt::format("unknown terminal stop '{}'", id));
    net.terminals.push_back(s->second);
  }
  std::sort(net.terminals.begin(), net.terminals.end());
  net.terminals.erase(std::unique(net.terminals.begin(), net.terminals.end()), net.terminals.end());

  std::mt19937_64 rng(options.seed);
  for (const auto& group : concatenate_trips(kept)) {
    VehicleRoute v;
    v.id = kept[group.front()].id;
    for (int t : group) {
      for (const RouteStop& rs : kept[t].stops) {
        // The junction stop is shared by consecutive trips; keep the arrival.
        if (!v.stops.empty() && v.stops.back().stop == rs.stop) continue;
        v.stops.push_back(rs);
      }
    }
    v.units = options.units;
    v.unit_capacity = options.capacities.sample(rng) / options.units;
    net.routes.push_back(std::move(v));
  }
  try {
    validate(net);
  } catch (const ValidationError& e) {
    throw IngestError(e.what());
  }
  return net;
}

}  // namespace cargohitch
