#include "jscity/store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

namespace jscity {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kIndexVersion = 1;

void check_project_name(const std::string& project) {
  if (project.empty() || project == "." || project == ".." ||
      project.find_first_of(std::string("/\\\0", 3)) != std::string::npos) {
    throw StoreError("invalid project name \"" + project + "\"");
  }
}

void check_analysis_id(const std::string& id) {
  if (id.empty() || !std::all_of(id.begin(), id.end(), [](char c) { return std::isxdigit(static_cast<unsigned char>(c)); })) {
    throw NotFoundError("malformed analysis id \"" + id + "\"");
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StoreError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Writes `data` to a temp file next to `target`, flushes it to disk and
// returns the temp path.
fs::path write_temp(const fs::path& target, std::string_view data) {
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) throw StoreError("cannot write " + tmp.string() + ": " + std::strerror(errno));
  std::size_t done = 0;
  while (done < data.size()) {
    ssize_t n = ::write(fd, data.data() + done, data.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      const std::string err = std::strerror(errno);
      ::close(fd);
      fs::remove(tmp);
      throw StoreError("cannot write " + tmp.string() + ": " + err);
    }
    done += static_cast<std::size_t>(n);
  }
  ::fsync(fd);
  ::close(fd);
  return tmp;
}

void commit(const fs::path& tmp, const fs::path& target) {
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw StoreError("cannot rename into " + target.string() + ": " + ec.message());
  }
}

// Advisory lock held for the duration of a save.
class ProjectLock {
 public:
  explicit ProjectLock(const fs::path& dir) {
    const fs::path path = dir / ".lock";
    fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0) throw StoreError("cannot open lock " + path.string() + ": " + std::strerror(errno));
    while (::flock(fd_, LOCK_EX) != 0) {
      if (errno != EINTR) {
        ::close(fd_);
        throw StoreError("cannot lock " + path.string());
      }
    }
  }
  ~ProjectLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  ProjectLock(const ProjectLock&) = delete;
  ProjectLock& operator=(const ProjectLock&) = delete;

 private:
  int fd_ = -1;
};

json record_json(const AnalysisRecord& r) {
  return json{{"project", r.project},
              {"analysis_id", r.analysis_id},
              {"created_at", r.created_at},
              {"scene_path", r.scene_path},
              {"stats", r.stats}};
}

AnalysisRecord record_from_json(const json& j) {
  AnalysisRecord r;
  r.project = j.at("project").get<std::string>();
  r.analysis_id = j.at("analysis_id").get<std::string>();
  r.created_at = j.at("created_at").get<std::string>();
  r.scene_path = j.at("scene_path").get<std::string>();
  r.stats = j.at("stats").get<ProjectStats>();
  return r;
}

std::vector<AnalysisRecord> read_index(const std::string& project, const fs::path& index_path) {
  if (!fs::exists(index_path)) return {};
  try {
    json doc = json::parse(read_file(index_path));
    if (doc.at("format_version").get<int>() != kIndexVersion) throw StoreError("unsupported index version");
    std::vector<AnalysisRecord> records;
    for (const auto& r : doc.at("records")) records.push_back(record_from_json(r));
    return records;
  } catch (const json::exception& e) {
    throw StoreError("index " + index_path.string() + " is corrupt (" + e.what() +
                     "); rebuild it from the scene files with `jscity list " + project +
                     " --rebuild-index`");
  }
}

void write_index(const std::string& project, const fs::path& index_path,
                 const std::vector<AnalysisRecord>& records, const std::function<void()>& hook) {
  json doc{{"format_version", kIndexVersion}, {"project", project}, {"records", json::array()}};
  for (const auto& r : records) doc["records"].push_back(record_json(r));
  const fs::path tmp = write_temp(index_path, doc.dump(2) + "\n");
  if (hook) {
    try {
      hook();
    } catch (...) {
      fs::remove(tmp);
      throw;
    }
  }
  commit(tmp, index_path);
}

void sort_newest_first(std::vector<AnalysisRecord>& records) {
  std::sort(records.begin(), records.end(), [](const AnalysisRecord& a, const AnalysisRecord& b) {
    if (a.created_at != b.created_at) return a.created_at > b.created_at;
    return a.analysis_id < b.analysis_id;
  });
}

}  // namespace

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw StoreError("SHA-256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

std::string analysis_id_for(const CityScene& scene) {
  return sha256_hex(serialize(scene, true)).substr(0, 16);
}

fs::path default_store_root() {
  const char* env = std::getenv("JSCITY_STORE");
  if (env != nullptr && *env != '\0') return env;
  return ".jscity-store";
}

std::string utc_timestamp_millis_now() {
  const auto now = std::chrono::system_clock::now();
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[40];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[48];
  std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
  return out;
}

AnalysisRecord save(const std::string& project, const CityScene& scene, const fs::path& store_root,
                    const SaveOptions& options) {
  check_project_name(project);
  const fs::path dir = store_root / project;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw StoreError("cannot create " + dir.string() + ": " + ec.message());

  const std::string id = analysis_id_for(scene);
  ProjectLock lock(dir);
  const fs::path index_path = dir / "index.json";
  std::vector<AnalysisRecord> records = read_index(project, index_path);
  for (const auto& r : records) {
    if (r.analysis_id == id) return r;
  }

  AnalysisRecord record;
  record.project = project;
  record.analysis_id = id;
  record.created_at = options.created_at.value_or(utc_timestamp_millis_now());
  record.scene_path = project + "/" + id + ".json";
  record.stats = scene.stats;

  const fs::path scene_file = store_root / record.scene_path;
  if (!fs::exists(scene_file)) commit(write_temp(scene_file, serialize(scene)), scene_file);

  records.push_back(record);
  write_index(project, index_path, records, options.before_index_rename);
  return record;
}

std::vector<AnalysisRecord> list(const std::string& project, const fs::path& store_root) {
  check_project_name(project);
  std::vector<AnalysisRecord> records = read_index(project, store_root / project / "index.json");
  sort_newest_first(records);
  return records;
}

AnalysisRecord find_record(const std::string& project, const std::optional<std::string>& analysis_id,
                           const fs::path& store_root) {
  std::vector<AnalysisRecord> records = list(project, store_root);
  if (records.empty()) throw NotFoundError("no analyses stored for project \"" + project + "\"");
  if (!analysis_id) return records.front();
  for (const auto& r : records) {
    if (r.analysis_id == *analysis_id) return r;
  }
  std::string available;
  for (const auto& r : records) available += (available.empty() ? "" : ", ") + r.analysis_id;
  throw NotFoundError("no analysis \"" + *analysis_id + "\" in project \"" + project +
                      "\"; available: " + available);
}

std::string read_scene_bytes(const AnalysisRecord& record, const fs::path& store_root) {
  check_analysis_id(record.analysis_id);
  return read_file(store_root / record.scene_path);
}

CityScene load(const std::string& project, const std::optional<std::string>& analysis_id,
               const fs::path& store_root) {
  const AnalysisRecord record = find_record(project, analysis_id, store_root);
  return parse_scene(read_scene_bytes(record, store_root));
}

std::vector<AnalysisRecord> rebuild_index(const std::string& project, const fs::path& store_root) {
  check_project_name(project);
  const fs::path dir = store_root / project;
  if (!fs::is_directory(dir)) throw NotFoundError("no store directory for project \"" + project + "\"");
  ProjectLock lock(dir);
  std::vector<AnalysisRecord> records;
  std::set<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const fs::path p = entry.path();
    if (entry.is_regular_file() && p.extension() == ".json" && p.filename() != "index.json") files.insert(p);
  }
  for (const auto& p : files) {
    CityScene scene;
    try {
      scene = parse_scene(read_file(p));
    } catch (const SceneError&) {
      continue;  // not a scene; leave it alone
    }
    const std::string id = analysis_id_for(scene);
    if (p.stem() != id) continue;
    records.push_back({project, id, scene.generated_at, project + "/" + p.filename().string(), scene.stats});
  }
  write_index(project, dir / "index.json", records, nullptr);
  sort_newest_first(records);
  return records;
}

}  // namespace jscity
