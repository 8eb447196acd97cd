#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>

#include "geobench/adapters.hpp"
#include "geobench/errors.hpp"
#include "geobench/wire.hpp"

extern char** environ;

namespace geobench {

struct ProcessAdapter::Child {
  pid_t pid = -1;
  int to_child = -1;
  int from_child = -1;
  std::string buffer;  // bytes read past the last newline
};

namespace {

void close_fd(int& fd) noexcept {
  if (fd >= 0) ::close(fd);
  fd = -1;
}

void ignore_sigpipe() {
  static const bool once = [] {
    struct sigaction sa {};
    sa.sa_handler = SIG_IGN;
    ::sigaction(SIGPIPE, &sa, nullptr);
    return true;
  }();
  (void)once;
}

}  // namespace

ProcessAdapter::ProcessAdapter(ProcessAdapterParams params) : params_(std::move(params)) {
  if (params_.command.empty()) throw UsageError("external-process geoparser needs a command");
  ignore_sigpipe();
}

ProcessAdapter::~ProcessAdapter() { stop(); }

void ProcessAdapter::start() {
  int in_pipe[2];
  int out_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) throw AdapterError(std::string("pipe: ") + std::strerror(errno));
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw AdapterError(std::string("pipe: ") + std::strerror(errno));
  }

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in_pipe[0], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);
  if (!params_.working_dir.empty())
    posix_spawn_file_actions_addchdir_np(&actions, params_.working_dir.c_str());

  std::vector<char*> argv;
  for (std::string& arg : params_.command) argv.push_back(arg.data());
  argv.push_back(nullptr);

  pid_t pid = -1;
  const int rc = ::posix_spawnp(&pid, argv[0], &actions, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  if (rc != 0) {
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    throw AdapterError("cannot start \"" + params_.command.front() + "\": " + std::strerror(rc));
  }

  child_ = std::make_unique<Child>();
  child_->pid = pid;
  child_->to_child = in_pipe[1];
  child_->from_child = out_pipe[0];
}

void ProcessAdapter::stop() noexcept {
  if (!child_) return;
  close_fd(child_->to_child);
  close_fd(child_->from_child);
  if (child_->pid > 0) {
    ::kill(child_->pid, SIGKILL);
    int status = 0;
    ::waitpid(child_->pid, &status, 0);
  }
  child_.reset();
}

std::string ProcessAdapter::exchange(const std::string& request_line) {
  if (!child_) start();
  using clock = std::chrono::steady_clock;
  const auto deadline = clock::now() + params_.timeout;

  const std::string message = request_line + "\n";
  std::size_t written = 0;
  while (written < message.size()) {
    const ssize_t n = ::write(child_->to_child, message.data() + written, message.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      const std::string reason = std::strerror(errno);
      stop();
      throw AdapterError("write to adapter failed: " + reason);
    }
    written += static_cast<std::size_t>(n);
  }

  char chunk[65536];
  while (true) {
    if (const auto nl = child_->buffer.find('\n'); nl != std::string::npos) {
      std::string line = child_->buffer.substr(0, nl);
      child_->buffer.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    const auto remaining =
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - clock::now()).count();
    if (remaining <= 0) {
      stop();
      throw AdapterTimeout("adapter did not answer within " + std::to_string(params_.timeout.count()) +
                           " ms");
    }
    pollfd pfd{child_->from_child, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, static_cast<int>(std::min<long long>(remaining, 1 << 30)));
    if (ready < 0) {
      if (errno == EINTR) continue;
      const std::string reason = std::strerror(errno);
      stop();
      throw AdapterError("poll failed: " + reason);
    }
    if (ready == 0) continue;
    const ssize_t n = ::read(child_->from_child, chunk, sizeof chunk);
    if (n < 0) {
      if (errno == EINTR) continue;
      const std::string reason = std::strerror(errno);
      stop();
      throw AdapterError("read from adapter failed: " + reason);
    }
    if (n == 0) {
      std::string partial = std::move(child_->buffer);
      stop();
      throw AdapterProtocolError("adapter exited before answering", std::move(partial));
    }
    child_->buffer.append(chunk, static_cast<std::size_t>(n));
  }
}

ParseOutput ProcessAdapter::parse(const Document& doc) {
  const std::string response = exchange(wire::encode_request(doc));
  return wire::decode_response(response, doc);
}

}  // namespace geobench
