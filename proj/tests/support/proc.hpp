#ifndef RIPL_TESTS_PROC_HPP
#define RIPL_TESTS_PROC_HPP

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace proc {

struct RunResult {
    int exit_code = -1;
    std::string output; // stdout and stderr interleaved
};

// Runs a shell command, capturing combined output and the exit code.
inline RunResult run(const std::string& cmd) {
    RunResult r;
    std::string full = cmd + " 2>&1";
    FILE* p = popen(full.c_str(), "r");
    if (!p) return r;
    std::array<char, 4096> buf;
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.output.append(buf.data(), n);
    int status = pclose(p);
    if (WIFEXITED(status)) r.exit_code = WEXITSTATUS(status);
    return r;
}

// Fresh scratch directory, removed on destruction.
class TempDir {
public:
    TempDir() {
        std::string tmpl =
            (std::filesystem::temp_directory_path() / "ripl_test_XXXXXX").string();
        std::vector<char> buf(tmpl.begin(), tmpl.end());
        buf.push_back('\0');
        if (mkdtemp(buf.data())) path_ = buf.data();
    }
    ~TempDir() {
        if (!path_.empty()) {
            std::error_code ec;
            std::filesystem::remove_all(path_, ec);
        }
    }
    const std::string& path() const { return path_; }
    std::string file(const std::string& name) const { return path_ + "/" + name; }

    void write(const std::string& name, const std::string& content) const {
        std::ofstream f(file(name), std::ios::binary);
        f << content;
    }
    std::string read(const std::string& name) const {
        std::ifstream f(file(name), std::ios::binary);
        std::ostringstream ss;
        ss << f.rdbuf();
        return ss.str();
    }
    bool exists(const std::string& name) const {
        return std::filesystem::exists(file(name));
    }

private:
    std::string path_;
};

} // namespace proc

#endif
