#include "visionflow/core/image_io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "visionflow/core/serde.hpp"
#include "visionflow/error.hpp"

namespace visionflow {

namespace {

struct PnmHeader {
  char magic = 0;  // '5' or '6'
  int width = 0;
  int height = 0;
  int maxval = 0;
  std::size_t data_offset = 0;
};

// Header tokens are separated by whitespace; '#' starts a comment that runs
// to the end of the line. Exactly one whitespace byte follows maxval.
PnmHeader parse_header(const std::string& bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6')) {
    throw Error(ErrorKind::ImageFormat, "not a binary PPM/PGM file");
  }
  PnmHeader h;
  h.magic = bytes[1];
  std::size_t pos = 2;
  int values[3] = {0, 0, 0};
  for (int& v : values) {
    while (pos < bytes.size()) {
      const char c = bytes[pos];
      if (c == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
      } else {
        break;
      }
    }
    if (pos >= bytes.size() || !std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
      throw Error(ErrorKind::ImageFormat, "malformed PNM header");
    }
    long long acc = 0;
    while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
      acc = acc * 10 + (bytes[pos] - '0');
      if (acc > (1 << 24)) throw Error(ErrorKind::ImageFormat, "PNM header value too large");
      ++pos;
    }
    v = static_cast<int>(acc);
  }
  if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
    throw Error(ErrorKind::ImageFormat, "missing whitespace after PNM header");
  }
  h.width = values[0];
  h.height = values[1];
  h.maxval = values[2];
  h.data_offset = pos + 1;
  if (h.width < 1 || h.height < 1) throw Error(ErrorKind::ImageFormat, "PNM dimensions must be positive");
  if (h.maxval < 1 || h.maxval > 255) throw Error(ErrorKind::ImageFormat, "only 8-bit PNM is supported");
  return h;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ImageFormat, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

ImageSourceKind guess_source_kind(const std::string& uri) noexcept {
  return ends_with(uri, ".json") ? ImageSourceKind::Scene : ImageSourceKind::Raster;
}

RgbImage decode_pnm(const std::string& bytes) {
  const PnmHeader h = parse_header(bytes);
  const std::size_t channels = h.magic == '6' ? 3 : 1;
  const std::size_t need = static_cast<std::size_t>(h.width) * h.height * channels;
  if (bytes.size() - h.data_offset < need) throw Error(ErrorKind::ImageFormat, "truncated PNM pixel data");
  RgbImage img(h.width, h.height);
  const auto* src = reinterpret_cast<const std::uint8_t*>(bytes.data() + h.data_offset);
  const std::size_t n = static_cast<std::size_t>(h.width) * h.height;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < 3; ++c) {
      const unsigned v = channels == 3 ? src[3 * i + c] : src[i];
      img.pixels[3 * i + c] = static_cast<std::uint8_t>(v * 255 / static_cast<unsigned>(h.maxval));
    }
  }
  return img;
}

RgbImage read_pnm(const std::filesystem::path& path) { return decode_pnm(read_file(path)); }

std::string encode_ppm(const RgbImage& image) {
  std::string out = "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(image.pixels.data()), image.pixels.size());
  return out;
}

void write_ppm(const std::filesystem::path& path, const RgbImage& image) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  const std::string bytes = encode_ppm(image);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::StorageFailure, "cannot write " + path.string());
}

SceneSpec parse_scene(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidScene, std::string("scene is not valid JSON: ") + e.what());
  }
  SceneSpec scene;
  try {
    scene.width = j.at("width").get<int>();
    scene.height = j.at("height").get<int>();
    scene.shapes = j.value("shapes", nlohmann::json::array()).get<std::vector<SceneShape>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidScene, e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidScene) throw;
    throw Error(ErrorKind::InvalidScene, e.detail());
  }
  validate_scene(scene);
  return scene;
}

SceneSpec load_scene(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error&) {
    throw Error(ErrorKind::InvalidScene, "cannot open scene " + path.string());
  }
  return parse_scene(text);
}

std::string dump_scene(const SceneSpec& scene) {
  nlohmann::ordered_json j;
  j["width"] = scene.width;
  j["height"] = scene.height;
  j["shapes"] = nlohmann::ordered_json::array();
  for (const SceneShape& s : scene.shapes) j["shapes"].push_back(s);
  return j.dump();
}

ImageRef probe_image(const std::string& path) {
  ImageRef ref;
  ref.uri = path;
  ref.id = std::filesystem::path(path).filename().string();
  ref.kind = guess_source_kind(path);
  if (ref.kind == ImageSourceKind::Scene) {
    const SceneSpec scene = load_scene(path);
    ref.width = scene.width;
    ref.height = scene.height;
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::ImageFormat, "cannot open " + path);
    std::string head(512, '\0');
    in.read(head.data(), static_cast<std::streamsize>(head.size()));
    head.resize(static_cast<std::size_t>(in.gcount()));
    const PnmHeader h = parse_header(head);
    ref.width = h.width;
    ref.height = h.height;
  }
  return ref;
}

}  // namespace visionflow
