#include "ddpen/grid/costmap_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace ddpen::grid {
namespace {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw CostMapIoError("cannot open " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw CostMapIoError("cannot write " + path.string());
  }
  out << body;
}

// Next whitespace-separated token, skipping '#' comments.
bool next_token(std::istream& in, std::string& token) {
  token.clear();
  char ch = 0;
  while (in.get(ch)) {
    if (ch == '#') {
      std::string ignored;
      std::getline(in, ignored);
      if (!token.empty()) {
        return true;
      }
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(ch))) {
      if (!token.empty()) {
        return true;
      }
      continue;
    }
    token.push_back(ch);
  }
  return !token.empty();
}

int parse_int(std::istream& in, const char* what) {
  std::string token;
  if (!next_token(in, token)) {
    throw CostMapIoError(std::string("PGM: missing ") + what);
  }
  try {
    std::size_t used = 0;
    const int value = std::stoi(token, &used);
    if (used != token.size()) {
      throw CostMapIoError(std::string("PGM: malformed ") + what);
    }
    return value;
  } catch (const std::logic_error&) {
    throw CostMapIoError(std::string("PGM: malformed ") + what);
  }
}

}  // namespace

std::string to_pgm(const CostMap& map) {
  std::ostringstream out;
  out << "P2\n" << map.width() << ' ' << map.height() << "\n255\n";
  for (int y = map.height() - 1; y >= 0; --y) {
    for (int x = 0; x < map.width(); ++x) {
      const auto pixel = static_cast<int>(std::lround(map.at(CellIndex{x, y}) * 255.0));
      out << pixel << (x + 1 == map.width() ? '\n' : ' ');
    }
  }
  return out.str();
}

std::string to_sidecar_json(const CostMap& map) {
  json j;
  j["resolution_m"] = map.resolution();
  j["origin_x_m"] = map.origin().x();
  j["origin_y_m"] = map.origin().y();
  j["lethal_threshold"] = map.lethal_threshold();
  return j.dump(2) + "\n";
}

CostMap from_pgm(const std::string& pgm, const std::string& sidecar_json) {
  json meta;
  try {
    meta = json::parse(sidecar_json);
  } catch (const json::exception& e) {
    throw CostMapIoError(std::string("sidecar: ") + e.what());
  }
  for (const char* key : {"resolution_m", "origin_x_m", "origin_y_m", "lethal_threshold"}) {
    if (!meta.contains(key) || !meta[key].is_number()) {
      throw CostMapIoError(std::string("sidecar: missing numeric field ") + key);
    }
  }
  std::istringstream in(pgm);
  std::string magic;
  if (!next_token(in, magic) || magic != "P2") {
    throw CostMapIoError("PGM: expected plain P2 header");
  }
  const int width = parse_int(in, "width");
  const int height = parse_int(in, "height");
  const int maxval = parse_int(in, "maxval");
  if (width <= 0 || height <= 0 || maxval <= 0 || maxval > 65535) {
    throw CostMapIoError("PGM: invalid dimensions or maxval");
  }
  CostMap map(width, height, meta["resolution_m"].get<double>(),
              Point2(meta["origin_x_m"].get<double>(), meta["origin_y_m"].get<double>()),
              meta["lethal_threshold"].get<double>());
  for (int y = height - 1; y >= 0; --y) {
    for (int x = 0; x < width; ++x) {
      const int pixel = parse_int(in, "pixel");
      if (pixel < 0 || pixel > maxval) {
        throw CostMapIoError("PGM: pixel out of range");
      }
      map.set(CellIndex{x, y}, static_cast<double>(pixel) / maxval);
    }
  }
  return map;
}

void save_costmap(const CostMap& map, const std::filesystem::path& stem) {
  std::filesystem::path base = stem;
  if (base.extension() == ".pgm") {
    base.replace_extension();
  }
  write_file(std::filesystem::path(base).concat(".pgm"), to_pgm(map));
  write_file(std::filesystem::path(base).concat(".json"), to_sidecar_json(map));
}

CostMap load_costmap(const std::filesystem::path& path) {
  std::filesystem::path base = path;
  if (base.extension() == ".pgm" || base.extension() == ".json") {
    base.replace_extension();
  }
  return from_pgm(read_file(std::filesystem::path(base).concat(".pgm")),
                  read_file(std::filesystem::path(base).concat(".json")));
}

}  // namespace ddpen::grid
