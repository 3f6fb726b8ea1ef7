import { ServiceClient } from "./api.js";
import { mountApp } from "./app.js";

// Service origin: same origin by default, ?service=http://host:port to override.
const params = new URLSearchParams(window.location.search);
const base = params.get("service") ?? "";

const root = document.getElementById("app");
if (root === null) throw new Error("missing #app container");
mountApp(root, new ServiceClient(base));
