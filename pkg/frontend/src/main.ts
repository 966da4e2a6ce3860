import { ApiClient } from "./api.js";
import { App } from "./app.js";

const api = new ApiClient((url, init) => fetch(url, init));
new App(document, window, api).init();
