import { ApiClient } from "./api.js";
import { GalleryStore } from "./state.js";
import { mount } from "./ui.js";

const store = new GalleryStore(new ApiClient(""));
mount(store, document.getElementById("app")!);
