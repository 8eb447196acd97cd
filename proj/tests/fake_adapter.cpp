// Scripted stand-in for an external geoparser speaking the line protocol.
//
//   fake_adapter fixed         one fixed prediction (10, 16, "Berlin")
//   fake_adapter empty         no predictions
//   fake_adapter oob           a span far outside the text
//   fake_adapter garbage       a line that is not JSON
//   fake_adapter wrong-id      a response for another document
//   fake_adapter silent        reads requests, never answers
//   fake_adapter exit          exits on the first request
//   fake_adapter fail-prefix P garbage for ids starting with P, empty otherwise

#include <chrono>
#include <iostream>
#include <string>
#include <thread>

#include <json.hpp>

int main(int argc, char** argv) {
  using nlohmann::json;
  const std::string mode = argc > 1 ? argv[1] : "empty";
  const std::string arg = argc > 2 ? argv[2] : "";
  std::string line;
  while (std::getline(std::cin, line)) {
    const json request = json::parse(line);
    const std::string id = request.at("id").get<std::string>();
    json response = {{"id", id}, {"toponyms", json::array()}};
    if (mode == "fixed") {
      response["toponyms"].push_back(
          {{"start", 10}, {"end", 16}, {"name", "Berlin"}, {"lat", 52.52}, {"lon", 13.405}});
    } else if (mode == "oob") {
      response["toponyms"].push_back({{"start", 0}, {"end", 10000}, {"name", "x"}});
    } else if (mode == "garbage") {
      std::cout << "this is not json" << std::endl;
      continue;
    } else if (mode == "wrong-id") {
      response["id"] = id + "-other";
    } else if (mode == "silent") {
      std::this_thread::sleep_for(std::chrono::seconds(30));
      continue;
    } else if (mode == "exit") {
      return 0;
    } else if (mode == "fail-prefix" && id.rfind(arg, 0) == 0) {
      std::cout << "{broken" << std::endl;
      continue;
    }
    std::cout << response.dump() << std::endl;
  }
  return 0;
}
