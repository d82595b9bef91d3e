import { ApiClient } from "./api.js";
import { ConsoleApp } from "./app.js";

const root = document.getElementById("app");
if (root) {
  const app = new ConsoleApp(new ApiClient(""), root);
  void app.start();
}
