import { ScenqClient } from "./api.js";
import { App } from "./app.js";

// Service base URL: ?api=http://host:port beats same-origin (the usual case
// when the service itself hosts the UI under /ui/).
const params = new URLSearchParams(window.location.search);
const base = params.get("api") ?? window.location.origin;

const root = document.getElementById("app");
if (!root) throw new Error("missing #app container");

const app = new App(root, new ScenqClient(base));
void app.init();

declare global {
  interface Window {
    scenqApp: App;
  }
}
window.scenqApp = app;
