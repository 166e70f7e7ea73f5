// Minimal fork/exec helpers for driving the CLI binary from tests.
#pragma once

#include <fcntl.h>
#include <signal.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace proc {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

class Child {
public:
    Child() = default;
    Child(const Child&) = delete;
    Child& operator=(const Child&) = delete;
    Child(Child&& other) noexcept : pid_(other.pid_), out_path_(std::move(other.out_path_)) {
        other.pid_ = -1;
    }
    Child& operator=(Child&& other) noexcept {
        if (this != &other) {
            terminate();
            pid_ = other.pid_;
            out_path_ = std::move(other.out_path_);
            other.pid_ = -1;
        }
        return *this;
    }
    ~Child() { terminate(); }

    // argv[0] is the binary path; stdout+stderr go to out_path.
    static Child spawn(const std::vector<std::string>& argv, const std::string& out_path) {
        Child child;
        child.out_path_ = out_path;
        pid_t pid = ::fork();
        if (pid < 0) throw std::runtime_error("fork failed");
        if (pid == 0) {
            int fd = ::open(out_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
            if (fd >= 0) {
                ::dup2(fd, STDOUT_FILENO);
                ::dup2(fd, STDERR_FILENO);
                ::close(fd);
            }
            std::vector<char*> args;
            for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
            args.push_back(nullptr);
            ::execv(args[0], args.data());
            _exit(127);
        }
        child.pid_ = pid;
        return child;
    }

    // Blocks; returns the exit code, or 128+signal when killed.
    int wait() {
        if (pid_ < 0) return -1;
        int status = 0;
        ::waitpid(pid_, &status, 0);
        pid_ = -1;
        if (WIFEXITED(status)) return WEXITSTATUS(status);
        if (WIFSIGNALED(status)) return 128 + WTERMSIG(status);
        return -1;
    }

    void terminate() {
        if (pid_ < 0) return;
        ::kill(pid_, SIGTERM);
        int status = 0;
        ::waitpid(pid_, &status, 0);
        pid_ = -1;
    }

    bool running() const {
        if (pid_ < 0) return false;
        return ::kill(pid_, 0) == 0;
    }

    std::string output() const { return read_file(out_path_); }

    // Polls the captured output until `needle` shows up (ready banners).
    bool wait_for_output(const std::string& needle, int timeout_ms = 5000) const {
        auto deadline =
            std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
        while (std::chrono::steady_clock::now() < deadline) {
            if (output().find(needle) != std::string::npos) return true;
            std::this_thread::sleep_for(std::chrono::milliseconds(20));
        }
        return false;
    }

    pid_t pid() const { return pid_; }

private:
    pid_t pid_ = -1;
    std::string out_path_;
};

struct RunResult {
    int exit_code = -1;
    std::string output;
};

inline RunResult run(const std::vector<std::string>& argv, const std::string& out_path) {
    Child child = Child::spawn(argv, out_path);
    RunResult result;
    result.exit_code = child.wait();
    result.output = read_file(out_path);
    return result;
}

inline std::string make_temp_dir(const char* prefix) {
    std::string tmpl = std::string("/tmp/") + prefix + "XXXXXX";
    std::vector<char> buf(tmpl.begin(), tmpl.end());
    buf.push_back('\0');
    if (!::mkdtemp(buf.data())) throw std::runtime_error("mkdtemp failed");
    return std::string(buf.data());
}

}  // namespace proc
