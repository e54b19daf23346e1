#include <unistd.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sys/wait.h>

#include "xolap/codegen.hpp"
#include "xolap/store.hpp"

namespace xolap {
namespace {

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

void replace_all(std::string& text, std::string_view from, const std::string& to) {
  for (std::size_t pos = text.find(from); pos != std::string::npos; pos = text.find(from, pos + to.size())) {
    text.replace(pos, from.size(), to);
  }
}

// Temporary file removed on scope exit.
class TempFile {
 public:
  explicit TempFile(const char* suffix) {
    std::string pattern = (std::filesystem::temp_directory_path() / "xolap-XXXXXX").string() + suffix;
    std::vector<char> buf(pattern.begin(), pattern.end());
    buf.push_back('\0');
    const int fd = mkstemps(buf.data(), static_cast<int>(std::string_view(suffix).size()));
    if (fd < 0) throw Error(ErrorCode::ProcessorFailure, "cannot create temporary file");
    ::close(fd);
    path_ = buf.data();
  }
  ~TempFile() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace

CellSet run_external(const GeneratedQuery& query, const std::filesystem::path& base_dir,
                     std::optional<std::string> command_template) {
  if (!command_template) {
    const char* env = std::getenv(kProcessorEnvVar);
    if (env != nullptr) command_template = env;
  }
  if (!command_template || command_template->empty()) {
    throw Error(ErrorCode::ProcessorUnavailable,
                std::string("no XQuery processor configured; set ") + kProcessorEnvVar);
  }

  TempFile query_file(".xq");
  TempFile stderr_file(".err");
  {
    std::ofstream out(query_file.path(), std::ios::binary);
    out << query.text;
  }
  std::string command = *command_template;
  replace_all(command, "{query_file}", shell_quote(query_file.path().string()));
  replace_all(command, "{base_dir}", shell_quote(std::filesystem::absolute(base_dir).string()));
  command += " 2>" + shell_quote(stderr_file.path().string());

  FILE* pipe = ::popen(command.c_str(), "r");
  if (pipe == nullptr) throw Error(ErrorCode::ProcessorFailure, "cannot start: " + command);
  std::string output;
  std::array<char, 4096> buf{};
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) output.append(buf.data(), n);
  const int status = ::pclose(pipe);
  if (status != 0) {
    std::string err;
    try {
      err = read_file(stderr_file.path());
    } catch (const Error&) {
    }
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    throw Error(ErrorCode::ProcessorFailure, "processor exited with status " + std::to_string(code) + ": " + err);
  }
  return parse_result_xml(output);
}

}  // namespace xolap
